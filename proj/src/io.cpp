#include "bellvis/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "bellvis/reference_tables.hpp"

namespace bellvis {

Json state_to_json(const PureState& state) {
    Json amps = Json::array();
    for (Eigen::Index i = 0; i < state.dim(); ++i)
        amps.push_back({state.amplitude(i).real(), state.amplitude(i).imag()});
    return Json{{"n", state.n_qubits()}, {"amplitudes", std::move(amps)}};
}

PureState state_from_json(const Json& j) {
    if (!j.contains("n") || !j.contains("amplitudes"))
        throw std::invalid_argument("state json: expected fields \"n\" and \"amplitudes\"");
    const int n = j.at("n").get<int>();
    if (n < 1 || n > 30) throw std::invalid_argument("state json: unreasonable qubit count");
    const auto& amps = j.at("amplitudes");
    if (!amps.is_array() || Eigen::Index(amps.size()) != (Eigen::Index(1) << n))
        throw std::invalid_argument("state json: amplitude list must have length 2^n");
    StateVector v(Eigen::Index(amps.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const auto& entry = amps[std::size_t(i)];
        if (!entry.is_array() || entry.size() != 2)
            throw std::invalid_argument("state json: amplitudes must be [re, im] pairs");
        v(i) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
    const double nrm = v.norm();
    if (std::abs(nrm - 1.0) > 1e-6)
        throw std::invalid_argument("state json: amplitudes are not normalized");
    v /= nrm;
    return PureState(n, std::move(v));
}

PureState load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open state file: " + path);
    Json j;
    in >> j;
    return state_from_json(j);
}

void save_state_file(const PureState& state, const std::string& path) {
    atomic_write_file(path, state_to_json(state).dump(2) + "\n");
}

Json scenario_to_json(const Scenario& scenario) {
    return Json{{"parties", scenario.n_parties}, {"settings", scenario.settings_per_party}};
}

Scenario scenario_from_json(const Json& j) {
    return Scenario(j.at("parties").get<int>(), j.at("settings").get<std::vector<int>>());
}

std::string format_fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

std::string behavior_to_csv(const Behavior& b) {
    std::string out = "setting_index,outcome_index,probability\n";
    const Eigen::Index no = b.scenario().outcome_count();
    for (std::uint64_t js = 0; js < b.scenario().joint_setting_count(); ++js)
        for (Eigen::Index jo = 0; jo < no; ++jo)
            out += std::to_string(js) + "," + std::to_string(jo) + "," +
                   format_fixed(b.at(js, jo), 4) + "\n";
    return out;
}

Json behavior_to_json(const Behavior& b) {
    Json rows = Json::array();
    const Eigen::Index no = b.scenario().outcome_count();
    for (std::uint64_t js = 0; js < b.scenario().joint_setting_count(); ++js)
        for (Eigen::Index jo = 0; jo < no; ++jo)
            rows.push_back({{"setting_index", js}, {"outcome_index", jo}, {"probability", b.at(js, jo)}});
    return Json{{"scenario", scenario_to_json(b.scenario())}, {"table", std::move(rows)}};
}

Json settings_to_json(const std::vector<std::vector<MeasurementSetting>>& settings) {
    Json parties = Json::array();
    for (const auto& list : settings) {
        Json one = Json::array();
        for (const auto& ms : list) {
            if (ms.is_projective())
                one.push_back({{"type", "projective"}, {"theta", ms.theta}, {"phi", ms.phi}});
            else
                one.push_back({{"type", "constant"}, {"outcome", ms.outcome}});
        }
        parties.push_back(std::move(one));
    }
    return parties;
}

std::vector<std::vector<MeasurementSetting>> settings_from_json(const Json& j) {
    std::vector<std::vector<MeasurementSetting>> settings;
    for (const auto& party : j) {
        std::vector<MeasurementSetting> list;
        for (const auto& ms : party) {
            const std::string type = ms.at("type").get<std::string>();
            if (type == "projective")
                list.push_back(MeasurementSetting::projective(ms.at("theta").get<double>(),
                                                              ms.at("phi").get<double>()));
            else if (type == "constant")
                list.push_back(MeasurementSetting::constant(ms.at("outcome").get<int>()));
            else
                throw std::invalid_argument("settings json: unknown setting type " + type);
        }
        settings.push_back(std::move(list));
    }
    return settings;
}

Json certificate_to_json(const BellCertificate& cert, double v_star) {
    Json functional = Json::array();
    for (Eigen::Index i = 0; i < cert.functional.size(); ++i) functional.push_back(cert.functional(i));
    return Json{{"functional", std::move(functional)},
                {"local_bound", cert.local_bound},
                {"quantum_value", cert.quantum_value},
                {"v_star", v_star},
                {"degenerate", cert.degenerate}};
}

Json expression_to_json(const BellExpression& expr) {
    Json terms = Json::array();
    for (const auto& [term, coeff] : expr.terms())
        terms.push_back({{"parties", term.parties},
                         {"settings", term.settings},
                         {"outcomes", term.outcomes},
                         {"coefficient", coeff}});
    return Json{{"scenario", scenario_to_json(expr.scenario())},
                {"bound", expr.bound()},
                {"constant", expr.constant()},
                {"terms", std::move(terms)}};
}

BellExpression expression_from_json(const Json& j) {
    BellExpression expr(scenario_from_json(j.at("scenario")), j.at("bound").get<double>());
    if (j.contains("constant")) expr.add_constant(j.at("constant").get<double>());
    for (const auto& t : j.at("terms")) {
        ProbabilityTerm term;
        term.parties = t.at("parties").get<std::vector<int>>();
        term.settings = t.at("settings").get<std::vector<int>>();
        term.outcomes = t.at("outcomes").get<std::vector<int>>();
        expr.add_term(std::move(term), t.at("coefficient").get<double>());
    }
    return expr;
}

Json config_to_json(const OptimizationConfig& cfg) {
    return Json{{"restarts", cfg.restarts},
                {"max_iterations", cfg.max_iterations},
                {"tolerance", cfg.tolerance},
                {"seed", cfg.seed},
                {"hints", cfg.hints},
                {"strategy_cap", cfg.strategy_cap},
                {"threads", cfg.threads}};
}

Json estimate_to_json(const CriticalVisibilityEstimate& est, const OptimizationConfig& cfg) {
    return Json{{"v_crit", est.v_crit},
                {"settings", settings_to_json(est.best_settings)},
                {"certificate", certificate_to_json(est.certificate, est.v_crit)},
                {"restarts_agreeing", est.restarts_agreeing},
                {"best_restart", est.best_restart},
                {"converged", est.converged},
                {"seed", est.seed},
                {"config", config_to_json(cfg)}};
}

Json violation_to_json(const ViolationReport& report) {
    return Json{{"violated", report.violated},
                {"value", report.value},
                {"pair", {report.pair.first, report.pair.second}},
                {"settings", settings_to_json(report.settings)},
                {"pair_concurrence", report.pair_concurrence},
                {"success_probability", report.success_probability}};
}

Json reference_tables_json() {
    Json t1 = Json::array();
    for (const auto& row : kReferenceTable1)
        t1.push_back({{"n", row.n}, {"ghz", row.ghz}, {"w", row.w}});
    Json t2 = Json::array();
    for (const auto& row : kReferenceTable2)
        t2.push_back({{"n", row.n}, {"zeros", row.zeros}, {"v", row.v}, {"bold", row.bold}});
    return Json{{"version", kReferenceTablesVersion}, {"table1", std::move(t1)}, {"table2", std::move(t2)}};
}

void atomic_write_file(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
        out << contents;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

} // namespace bellvis
