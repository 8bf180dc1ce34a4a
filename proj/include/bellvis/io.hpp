#pragma once

#include <string>

#include <json.hpp>

#include "bellvis/bell_expression.hpp"
#include "bellvis/local_polytope.hpp"
#include "bellvis/optimize.hpp"

namespace bellvis {

using Json = nlohmann::json;

// state files: { "n": int, "amplitudes": [[re, im], ...] }
Json state_to_json(const PureState& state);
PureState state_from_json(const Json& j);
PureState load_state_file(const std::string& path);
void save_state_file(const PureState& state, const std::string& path);

Json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const Json& j);

// behavior export for inspection: CSV `setting_index,outcome_index,probability`
// (4 decimal places) and a full-precision JSON equivalent
std::string behavior_to_csv(const Behavior& b);
Json behavior_to_json(const Behavior& b);

Json settings_to_json(const std::vector<std::vector<MeasurementSetting>>& settings);
std::vector<std::vector<MeasurementSetting>> settings_from_json(const Json& j);

Json certificate_to_json(const BellCertificate& cert, double v_star);

// expression interchange: term list {parties, settings, outcomes, coefficient}
// plus bound (and scenario/constant so the import is self-contained)
Json expression_to_json(const BellExpression& expr);
BellExpression expression_from_json(const Json& j);

Json config_to_json(const OptimizationConfig& cfg);
Json estimate_to_json(const CriticalVisibilityEstimate& est, const OptimizationConfig& cfg);
Json violation_to_json(const ViolationReport& report);

// the embedded reference dataset as JSON (identical to data/tables.json)
Json reference_tables_json();

// write-temp-then-rename, so partially written outputs are never observed
void atomic_write_file(const std::string& path, const std::string& contents);

// fixed-point formatting used by every CSV output (locale independent)
std::string format_fixed(double x, int decimals);

} // namespace bellvis
