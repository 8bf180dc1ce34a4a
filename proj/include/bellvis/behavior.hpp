#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bellvis/states.hpp"

namespace bellvis {

// A measurement a party can choose: a projective qubit observable n.sigma
// given by Bloch angles, or a degenerate "constant" measurement that yields
// a fixed outcome regardless of the state.
//
// Outcome labels (fixed library-wide, see also docs/ in behavior.cpp):
//   eigenvalue +1 of n.sigma  <->  outcome 0  <->  projector (I + n.sigma)/2
//   eigenvalue -1 of n.sigma  <->  outcome 1  <->  projector (I - n.sigma)/2
// so the +-1-valued observable satisfies <A> = p(0) - p(1), equivalently
// p(1) = (1 - <A>)/2. Probability-form (Clauser-Horne style) expressions in
// this library count outcome label 1 as the "1" result.
struct MeasurementSetting {
    enum class Kind { projective, constant };

    static MeasurementSetting projective(double theta, double phi) {
        return {Kind::projective, theta, phi, 0};
    }
    static MeasurementSetting constant(int outcome);

    Kind kind = Kind::projective;
    double theta = 0.0;
    double phi = 0.0;
    int outcome = 0;  // used by Kind::constant only

    bool is_projective() const { return kind == Kind::projective; }
    Eigen::Vector3d bloch() const {
        return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                std::cos(theta)};
    }
    SiteObservable observable() const { return SiteObservable::bloch(theta, phi); }
};

// Bell scenario: n parties, a per-party number of settings, two outcomes.
struct Scenario {
    Scenario() = default;
    Scenario(int parties, std::vector<int> settings);
    // uniform settings count
    Scenario(int parties, int settings_each);

    int n_parties = 0;
    std::vector<int> settings_per_party;

    std::uint64_t joint_setting_count() const;
    Eigen::Index outcome_count() const { return Eigen::Index(1) << n_parties; }
    Eigen::Index table_size() const { return Eigen::Index(joint_setting_count()) * outcome_count(); }

    // mixed-radix joint setting index, party 0 most significant
    int setting_of(std::uint64_t joint_setting, int party) const;
    std::uint64_t joint_setting_index(const std::vector<int>& per_party) const;
    // outcome bits, party 0 most significant
    int outcome_of(Eigen::Index joint_outcome, int party) const {
        return int((joint_outcome >> (n_parties - 1 - party)) & 1);
    }

    bool operator==(const Scenario& other) const {
        return n_parties == other.n_parties && settings_per_party == other.settings_per_party;
    }
};

// Full table p(outcomes | settings) for a scenario, stored dense: entry
// (joint_setting, joint_outcome) at flat index js * 2^n + jo.
class Behavior {
public:
    Behavior(Scenario scenario, Eigen::VectorXd table);

    const Scenario& scenario() const { return scenario_; }
    const Eigen::VectorXd& table() const { return table_; }
    double at(std::uint64_t joint_setting, Eigen::Index joint_outcome) const {
        return table_(Eigen::Index(joint_setting) * scenario_.outcome_count() + joint_outcome);
    }

    // max_j |sum_o p(o|j) - 1|
    double normalization_residual() const;
    // largest violation of the one-party no-signaling conditions
    double no_signaling_residual() const;
    // p(outcomes of `parties` | their settings), other parties summed out at
    // the given joint setting
    double marginal(std::uint64_t joint_setting, const std::vector<int>& parties,
                    const std::vector<int>& outcomes) const;

private:
    Scenario scenario_;
    Eigen::VectorXd table_;
};

// The behavior of rho(v) under the given per-party measurement choices.
// Entries are affine in v by construction: v * (quantum table) + (1-v) * (v=0 table).
// Constant settings bypass the state: they contribute deterministic indicator
// factors unaffected by the noise admixture.
Behavior joint_probabilities(const NoisyState& state,
                             const std::vector<std::vector<MeasurementSetting>>& settings);

// <(x)_k directions[k]> on rho(v); identity markers allowed per site.
double correlation_component(const NoisyState& state, const std::vector<SiteObservable>& directions);

} // namespace bellvis
