#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "bellvis/behavior.hpp"
#include "bellvis/simplex.hpp"
#include "bellvis/util.hpp"

namespace bellvis {

inline constexpr std::uint64_t kDefaultStrategyCap = std::uint64_t(1) << 22;

// Local deterministic strategy: each party fixes an outcome for each of its
// settings. These are the vertices of the local polytope.
struct DeterministicStrategy {
    std::vector<std::vector<int>> outcomes;  // [party][setting] in {0,1}

    int outcome(int party, int setting) const { return outcomes[std::size_t(party)][std::size_t(setting)]; }

    // Index in the lexicographic order of the concatenated assignment bits
    // (party 0 setting 0 the most significant bit).
    static DeterministicStrategy from_index(const Scenario& scenario, std::uint64_t index);
    std::uint64_t to_index(const Scenario& scenario) const;
};

// prod_i 2^{settings_i}; throws SizeRefusalError when above `cap`.
std::uint64_t strategy_count(const Scenario& scenario, std::uint64_t cap = kDefaultStrategyCap);

// Visits all strategies exactly once in index order.
void enumerate_strategies(const Scenario& scenario, std::uint64_t cap,
                          const std::function<void(std::uint64_t, const DeterministicStrategy&)>& visit);

// The 0/1 behavior table induced by a strategy; satisfies the Behavior
// invariants exactly.
Behavior strategy_behavior(const DeterministicStrategy& strategy, const Scenario& scenario);

// Collins-Gisin style coordinates of a behavior: one entry per (party subset,
// settings on the subset) holding the probability that every party in the
// subset reports outcome 1. Rows are mixed-radix indexed, digit m_i + 1 per
// party: 0 = party absent, 1+s = party measures setting s. The empty row is
// the normalization (value 1 on every behavior). Behaviors that satisfy
// no-signaling are uniquely determined by these coordinates.
class CollinsGisin {
public:
    explicit CollinsGisin(Scenario scenario);

    Eigen::Index rows() const { return rows_; }
    const Scenario& scenario() const { return scenario_; }

    std::vector<int> row_digits(Eigen::Index row) const;
    Eigen::VectorXd from_behavior(const Behavior& b) const;
    Eigen::VectorXd white_noise() const;
    // rows where the strategy's coordinate vector equals 1 (all others are 0)
    std::vector<int> strategy_rows(const DeterministicStrategy& s) const;
    // adjoint map: given row coefficients y, the full-table functional f with
    // f . table(b) = y . from_behavior(b) for every behavior b
    Eigen::VectorXd functional_to_table(const Eigen::VectorXd& y) const;

private:
    Scenario scenario_;
    Eigen::Index rows_;
    std::vector<Eigen::Index> weight_;  // mixed-radix place value per party
};

// Bell functional over behavior-table entries, extracted from the LP dual.
// Certifies nonlocality whenever quantum_value > local_bound.
struct BellCertificate {
    Eigen::VectorXd functional;
    double local_bound = 0.0;
    double quantum_value = 0.0;
    bool degenerate = false;  // set when the behavior is local (v* = 1)
};

struct VisibilityResult {
    double v_star = 0.0;
    // sparse decomposition of Behavior(v_star) over strategy indices
    std::vector<std::pair<std::uint64_t, double>> weights;
    BellCertificate certificate;
    int lp_iterations = 0;
    bool warm_started = false;
};

// LP machinery for one scenario: max v subject to
//   sum_s q_s D_s = v Q + (1-v) Noise,  q >= 0,  sum_s q_s = 1,  0 <= v <= 1,
// solved in Collins-Gisin coordinates (the deterministic-strategy columns and
// the dense basis work shrink from (prod m_i) 2^N to prod (m_i + 1) rows).
// Instances are reusable: repeated solves against the same scenario warm
// start from the previous optimal basis.
class LocalPolytope {
public:
    explicit LocalPolytope(Scenario scenario, std::uint64_t cap = kDefaultStrategyCap);

    const Scenario& scenario() const { return cg_.scenario(); }
    std::uint64_t strategies() const { return n_strategies_; }

    // noise defaults to the white-noise behavior (every entry 2^-N)
    VisibilityResult max_local_visibility(const Behavior& quantum);
    VisibilityResult max_local_visibility(const Behavior& quantum, const Behavior& noise);

    // v* only, skipping certificate and weight extraction (hot path for the
    // outer settings optimization)
    double visibility(const Behavior& quantum);

    // membership within tolerance 1e-8: v* >= 1 - 1e-8 against white noise
    std::pair<bool, BellCertificate> is_local(const Behavior& b);

private:
    VisibilityResult solve(const Eigen::VectorXd& cg_quantum, const Eigen::VectorXd& cg_noise,
                           bool with_certificate);

    CollinsGisin cg_;
    std::uint64_t n_strategies_;
    std::unique_ptr<RevisedSimplex> lp_;
    int v_col_ = -1;
    int w_col_ = -1;
    Eigen::VectorXd cg_white_;
};

} // namespace bellvis
