#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bellvis/behavior.hpp"
#include "bellvis/local_polytope.hpp"
#include "bellvis/states.hpp"
#include "bellvis/two_qubit.hpp"

namespace bellvis {

struct OptimizationConfig {
    int restarts = 20;
    int max_iterations = 400;   // Nelder-Mead iterations per restart
    double tolerance = 1e-6;    // convergence tolerance on v
    std::uint64_t seed = 0;
    // start families seeding each restart; empty = built-in schedule.
    // Recognized names: "xy-plane", "xz-plane", "paper-dicke".
    std::vector<std::string> hints;
    std::uint64_t strategy_cap = kDefaultStrategyCap;
    int threads = 0;            // 0 = hardware concurrency
    int max_seesaw_qubits = 5;  // guard for optimize_state_and_settings
};

struct CriticalVisibilityEstimate {
    double v_crit = 1.0;
    std::vector<std::vector<MeasurementSetting>> best_settings;
    BellCertificate certificate;
    int restarts_agreeing = 0;  // restarts within 1e-4 of the best value
    int best_restart = 0;
    bool converged = true;      // best restart finished inside the iteration cap
    std::uint64_t seed = 0;
};

// Minimize the LP visibility over projective measurement settings,
// derivative-free simplex descent over the (theta, phi) angle vector with
// seeded multistart. Deterministic for fixed seed and config.
CriticalVisibilityEstimate optimize_settings(const PureState& state, const Scenario& scenario,
                                             const OptimizationConfig& cfg);

// Alternating (see-saw) minimization over settings and pure-state amplitudes.
std::pair<PureState, CriticalVisibilityEstimate> optimize_state_and_settings(
    int n, const Scenario& scenario, const OptimizationConfig& cfg);

// Local projections on all parties except `keep` maximizing the concurrence
// of the post-selected pair.
struct ProjectionResult {
    std::vector<Eigen::Vector3d> directions;  // per projected party, Bloch vector projected onto
    StateVector pair_state;                   // normalized post-selected state of `keep`
    double success_probability = 0.0;
    double concurrence = 0.0;
    bool failed = false;  // all trials had post-selection probability < 1e-12
};
ProjectionResult max_entangling_projections(const PureState& state, std::pair<int, int> keep,
                                            const OptimizationConfig& cfg);

// Constructive three-setting violation search for pure entangled states:
// pick a pair (i,j), project the rest onto their entangling directions
// (outcome "1" = successful projection), give i,j a constant-0 first setting
// and CHSH-optimal second/third settings for the post-selected pair, and
// evaluate the symmetrized CH expression. A positive value certifies
// violation (LHV bound 0); failure to violate reports the best value found.
struct ViolationReport {
    bool violated = false;
    double value = 0.0;
    std::pair<int, int> pair{0, 1};
    std::vector<std::vector<MeasurementSetting>> settings;
    double pair_concurrence = 0.0;
    double success_probability = 0.0;
};
ViolationReport check_pure_entangled_violation(const PureState& state,
                                               const OptimizationConfig& cfg);

// angle-vector <-> settings packing shared by the optimizer and the CLI
std::vector<std::vector<MeasurementSetting>> unpack_settings(const Scenario& scenario,
                                                             const Eigen::VectorXd& angles);
Eigen::VectorXd pack_settings(const Scenario& scenario,
                              const std::vector<std::vector<MeasurementSetting>>& settings);

} // namespace bellvis
