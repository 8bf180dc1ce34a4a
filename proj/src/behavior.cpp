#include "bellvis/behavior.hpp"

#include <cmath>
#include <stdexcept>

namespace bellvis {

MeasurementSetting MeasurementSetting::constant(int outcome) {
    if (outcome != 0 && outcome != 1)
        throw std::invalid_argument("MeasurementSetting: constant outcome must be 0 or 1");
    MeasurementSetting s;
    s.kind = Kind::constant;
    s.outcome = outcome;
    return s;
}

Scenario::Scenario(int parties, std::vector<int> settings)
    : n_parties(parties), settings_per_party(std::move(settings)) {
    if (n_parties < 1) throw std::invalid_argument("Scenario: need at least one party");
    if (int(settings_per_party.size()) != n_parties)
        throw std::invalid_argument("Scenario: one settings count per party required");
    for (int m : settings_per_party)
        if (m < 1) throw std::invalid_argument("Scenario: every party needs >= 1 setting");
}

Scenario::Scenario(int parties, int settings_each)
    : Scenario(parties, std::vector<int>(parties, settings_each)) {}

std::uint64_t Scenario::joint_setting_count() const {
    std::uint64_t total = 1;
    for (int m : settings_per_party) total *= std::uint64_t(m);
    return total;
}

int Scenario::setting_of(std::uint64_t joint_setting, int party) const {
    // party 0 is the most significant digit
    for (int p = n_parties - 1; p > party; --p) joint_setting /= std::uint64_t(settings_per_party[p]);
    return int(joint_setting % std::uint64_t(settings_per_party[party]));
}

std::uint64_t Scenario::joint_setting_index(const std::vector<int>& per_party) const {
    std::uint64_t idx = 0;
    for (int p = 0; p < n_parties; ++p) idx = idx * std::uint64_t(settings_per_party[p]) + std::uint64_t(per_party[p]);
    return idx;
}

Behavior::Behavior(Scenario scenario, Eigen::VectorXd table)
    : scenario_(std::move(scenario)), table_(std::move(table)) {
    if (table_.size() != scenario_.table_size())
        throw std::invalid_argument("Behavior: table size does not match scenario");
}

double Behavior::normalization_residual() const {
    const Eigen::Index no = scenario_.outcome_count();
    double worst = 0.0;
    for (std::uint64_t js = 0; js < scenario_.joint_setting_count(); ++js) {
        const double s = table_.segment(Eigen::Index(js) * no, no).sum();
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

double Behavior::no_signaling_residual() const {
    // For each party i: the marginal over the remaining parties must not
    // depend on party i's setting. Checking this per party for all joint
    // settings of the others implies full no-signaling.
    const int n = scenario_.n_parties;
    const Eigen::Index no = scenario_.outcome_count();
    double worst = 0.0;
    std::vector<int> settings(n, 0);
    for (int i = 0; i < n; ++i) {
        if (scenario_.settings_per_party[i] < 2) continue;
        // enumerate joint settings of the other parties
        std::vector<int> others;
        for (int p = 0; p < n; ++p)
            if (p != i) others.push_back(p);
        std::uint64_t combos = 1;
        for (int p : others) combos *= std::uint64_t(scenario_.settings_per_party[p]);
        for (std::uint64_t c = 0; c < combos; ++c) {
            std::uint64_t rest = c;
            for (auto it = others.rbegin(); it != others.rend(); ++it) {
                settings[*it] = int(rest % std::uint64_t(scenario_.settings_per_party[*it]));
                rest /= std::uint64_t(scenario_.settings_per_party[*it]);
            }
            // marginal over party i's outcome for each outcome pattern of the others
            for (Eigen::Index oo = 0; oo < (no >> 1); ++oo) {
                // oo enumerates outcome bits of the other parties in order
                double ref = 0.0;
                for (int si = 0; si < scenario_.settings_per_party[i]; ++si) {
                    settings[i] = si;
                    const std::uint64_t js = scenario_.joint_setting_index(settings);
                    double m = 0.0;
                    for (int oi = 0; oi < 2; ++oi) {
                        Eigen::Index jo = 0;
                        Eigen::Index bits = oo;
                        for (int p = n - 1; p >= 0; --p) {
                            int bit;
                            if (p == i) {
                                bit = oi;
                            } else {
                                bit = int(bits & 1);
                                bits >>= 1;
                            }
                            jo |= Eigen::Index(bit) << (n - 1 - p);
                        }
                        m += at(js, jo);
                    }
                    if (si == 0) ref = m;
                    else worst = std::max(worst, std::abs(m - ref));
                }
            }
        }
        settings[i] = 0;
    }
    return worst;
}

double Behavior::marginal(std::uint64_t joint_setting, const std::vector<int>& parties,
                          const std::vector<int>& outcomes) const {
    const int n = scenario_.n_parties;
    const Eigen::Index no = scenario_.outcome_count();
    double p = 0.0;
    for (Eigen::Index jo = 0; jo < no; ++jo) {
        bool match = true;
        for (std::size_t k = 0; k < parties.size(); ++k) {
            if (scenario_.outcome_of(jo, parties[k]) != outcomes[k]) { match = false; break; }
        }
        if (match) p += at(joint_setting, jo);
    }
    (void)n;
    return p;
}

Behavior joint_probabilities(const NoisyState& state,
                             const std::vector<std::vector<MeasurementSetting>>& settings) {
    const PureState& psi = state.pure;
    const int n = psi.n_qubits();
    if (int(settings.size()) != n)
        throw std::invalid_argument("joint_probabilities: one settings list per qubit required");
    std::vector<int> counts(n);
    for (int p = 0; p < n; ++p) {
        if (settings[p].empty())
            throw std::invalid_argument("joint_probabilities: every party needs >= 1 setting");
        counts[p] = int(settings[p].size());
    }
    Scenario scenario(n, counts);

    const Eigen::Index no = scenario.outcome_count();
    Eigen::VectorXd table(scenario.table_size());
    const double v = state.visibility;

    for (std::uint64_t js = 0; js < scenario.joint_setting_count(); ++js) {
        // rotate each projectively measured qubit into its measurement
        // eigenbasis; afterwards that qubit's basis bit equals its outcome label
        StateVector phi = psi.amplitudes();
        int n_projective = 0;
        std::vector<const MeasurementSetting*> chosen(n);
        for (int p = 0; p < n; ++p) {
            const MeasurementSetting& ms = settings[p][scenario.setting_of(js, p)];
            chosen[p] = &ms;
            if (!ms.is_projective()) continue;
            ++n_projective;
            const double ct = std::cos(ms.theta / 2), st = std::sin(ms.theta / 2);
            const Complex em = std::exp(Complex(0.0, -ms.phi));
            Eigen::Matrix2cd u_dag;
            // rows are <n+| and <n-|  (outcome 0 row first)
            u_dag << ct, em * st,
                     st, -em * ct;
            phi = apply_single_qubit(phi, n, p, u_dag);
        }
        const double noise_entry = 1.0 / double(Eigen::Index(1) << n_projective);

        // quantum probabilities for each outcome pattern of the projective
        // parties (constant parties' qubits are summed out)
        Eigen::VectorXd quantum = Eigen::VectorXd::Zero(no);
        for (Eigen::Index idx = 0; idx < phi.size(); ++idx) {
            const double w = std::norm(phi(idx));
            if (w == 0.0) continue;
            Eigen::Index key = 0;
            for (int p = 0; p < n; ++p) {
                const int bit = chosen[p]->is_projective() ? psi.qubit_bit(idx, p) : 0;
                key |= Eigen::Index(bit) << (n - 1 - p);
            }
            quantum(key) += w;
        }

        for (Eigen::Index jo = 0; jo < no; ++jo) {
            // constant parties force their declared outcome
            bool allowed = true;
            Eigen::Index key = 0;
            for (int p = 0; p < n; ++p) {
                const int bit = scenario.outcome_of(jo, p);
                if (chosen[p]->is_projective()) {
                    key |= Eigen::Index(bit) << (n - 1 - p);
                } else if (bit != chosen[p]->outcome) {
                    allowed = false;
                    break;
                }
            }
            const Eigen::Index flat = Eigen::Index(js) * no + jo;
            if (!allowed) {
                table(flat) = 0.0;
            } else {
                table(flat) = v * quantum(key) + (1.0 - v) * noise_entry;
            }
        }
    }
    return Behavior(std::move(scenario), std::move(table));
}

double correlation_component(const NoisyState& state,
                             const std::vector<SiteObservable>& directions) {
    return expectation(state, directions);
}

} // namespace bellvis
