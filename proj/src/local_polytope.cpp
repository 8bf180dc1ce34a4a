#include "bellvis/local_polytope.hpp"

#include <bit>
#include <cmath>

namespace bellvis {

DeterministicStrategy DeterministicStrategy::from_index(const Scenario& scenario,
                                                        std::uint64_t index) {
    DeterministicStrategy s;
    s.outcomes.resize(std::size_t(scenario.n_parties));
    for (int p = scenario.n_parties - 1; p >= 0; --p) {
        const int m = scenario.settings_per_party[std::size_t(p)];
        s.outcomes[std::size_t(p)].resize(std::size_t(m));
        for (int q = m - 1; q >= 0; --q) {
            s.outcomes[std::size_t(p)][std::size_t(q)] = int(index & 1);
            index >>= 1;
        }
    }
    return s;
}

std::uint64_t DeterministicStrategy::to_index(const Scenario& scenario) const {
    std::uint64_t index = 0;
    for (int p = 0; p < scenario.n_parties; ++p)
        for (int q = 0; q < scenario.settings_per_party[std::size_t(p)]; ++q)
            index = (index << 1) | std::uint64_t(outcomes[std::size_t(p)][std::size_t(q)]);
    return index;
}

std::uint64_t strategy_count(const Scenario& scenario, std::uint64_t cap) {
    int bits = 0;
    for (int m : scenario.settings_per_party) bits += m;
    if (bits >= 63)
        throw SizeRefusalError(0, cap, "strategy_count: scenario too large to enumerate");
    const std::uint64_t count = std::uint64_t(1) << bits;
    if (count > cap)
        throw SizeRefusalError(count, cap,
                               "strategy_count: " + std::to_string(count) +
                                   " deterministic strategies exceed the cap of " +
                                   std::to_string(cap));
    return count;
}

void enumerate_strategies(const Scenario& scenario, std::uint64_t cap,
                          const std::function<void(std::uint64_t, const DeterministicStrategy&)>& visit) {
    const std::uint64_t count = strategy_count(scenario, cap);
    DeterministicStrategy s = DeterministicStrategy::from_index(scenario, 0);
    for (std::uint64_t g = 0; g < count; ++g) {
        // increment the assignment bits in place (lexicographic order)
        if (g > 0) {
            int p = scenario.n_parties - 1;
            int q = scenario.settings_per_party[std::size_t(p)] - 1;
            while (true) {
                int& bit = s.outcomes[std::size_t(p)][std::size_t(q)];
                if (bit == 0) {
                    bit = 1;
                    break;
                }
                bit = 0;
                if (--q < 0) {
                    --p;
                    q = scenario.settings_per_party[std::size_t(p)] - 1;
                }
            }
        }
        visit(g, s);
    }
}

Behavior strategy_behavior(const DeterministicStrategy& strategy, const Scenario& scenario) {
    const Eigen::Index no = scenario.outcome_count();
    Eigen::VectorXd table = Eigen::VectorXd::Zero(scenario.table_size());
    for (std::uint64_t js = 0; js < scenario.joint_setting_count(); ++js) {
        Eigen::Index jo = 0;
        for (int p = 0; p < scenario.n_parties; ++p) {
            const int o = strategy.outcome(p, scenario.setting_of(js, p));
            jo |= Eigen::Index(o) << (scenario.n_parties - 1 - p);
        }
        table(Eigen::Index(js) * no + jo) = 1.0;
    }
    return Behavior(scenario, std::move(table));
}

CollinsGisin::CollinsGisin(Scenario scenario) : scenario_(std::move(scenario)) {
    weight_.resize(std::size_t(scenario_.n_parties));
    Eigen::Index w = 1;
    for (int p = scenario_.n_parties - 1; p >= 0; --p) {
        weight_[std::size_t(p)] = w;
        w *= Eigen::Index(scenario_.settings_per_party[std::size_t(p)] + 1);
    }
    rows_ = w;
}

std::vector<int> CollinsGisin::row_digits(Eigen::Index row) const {
    std::vector<int> digits(std::size_t(scenario_.n_parties));
    for (int p = 0; p < scenario_.n_parties; ++p) {
        digits[std::size_t(p)] = int(row / weight_[std::size_t(p)]);
        row %= weight_[std::size_t(p)];
    }
    return digits;
}

Eigen::VectorXd CollinsGisin::from_behavior(const Behavior& b) const {
    if (!(b.scenario() == scenario_))
        throw std::invalid_argument("CollinsGisin: scenario mismatch");
    Eigen::VectorXd out(rows_);
    std::vector<int> settings(std::size_t(scenario_.n_parties), 0);
    std::vector<int> parties, outcomes;
    for (Eigen::Index r = 0; r < rows_; ++r) {
        const std::vector<int> digits = row_digits(r);
        parties.clear();
        outcomes.clear();
        std::fill(settings.begin(), settings.end(), 0);
        for (int p = 0; p < scenario_.n_parties; ++p) {
            if (digits[std::size_t(p)] == 0) continue;
            parties.push_back(p);
            outcomes.push_back(1);
            settings[std::size_t(p)] = digits[std::size_t(p)] - 1;
        }
        out(r) = b.marginal(scenario_.joint_setting_index(settings), parties, outcomes);
    }
    return out;
}

Eigen::VectorXd CollinsGisin::white_noise() const {
    Eigen::VectorXd out(rows_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
        const std::vector<int> digits = row_digits(r);
        int k = 0;
        for (int d : digits)
            if (d > 0) ++k;
        out(r) = std::exp2(double(-k));
    }
    return out;
}

std::vector<int> CollinsGisin::strategy_rows(const DeterministicStrategy& s) const {
    // depth-first walk over parties, keeping only digits whose outcome is 1
    std::vector<int> rows;
    std::vector<std::pair<int, Eigen::Index>> stack;  // (party, row index so far)
    stack.emplace_back(0, 0);
    while (!stack.empty()) {
        auto [p, base] = stack.back();
        stack.pop_back();
        if (p == scenario_.n_parties) {
            rows.push_back(int(base));
            continue;
        }
        const int m = scenario_.settings_per_party[std::size_t(p)];
        // reverse push so rows come out in increasing order
        for (int q = m - 1; q >= 0; --q)
            if (s.outcome(p, q) == 1)
                stack.emplace_back(p + 1, base + Eigen::Index(q + 1) * weight_[std::size_t(p)]);
        stack.emplace_back(p + 1, base);
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

Eigen::VectorXd CollinsGisin::functional_to_table(const Eigen::VectorXd& y) const {
    if (y.size() != rows_) throw std::invalid_argument("CollinsGisin: functional size mismatch");
    const Eigen::Index no = scenario_.outcome_count();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(scenario_.table_size());
    std::vector<int> settings(std::size_t(scenario_.n_parties), 0);
    for (Eigen::Index r = 0; r < rows_; ++r) {
        if (y(r) == 0.0) continue;
        const std::vector<int> digits = row_digits(r);
        std::fill(settings.begin(), settings.end(), 0);
        Eigen::Index fixed_mask = 0;
        Eigen::Index fixed_bits = 0;
        for (int p = 0; p < scenario_.n_parties; ++p) {
            if (digits[std::size_t(p)] == 0) continue;
            settings[std::size_t(p)] = digits[std::size_t(p)] - 1;
            fixed_mask |= Eigen::Index(1) << (scenario_.n_parties - 1 - p);
            fixed_bits |= Eigen::Index(1) << (scenario_.n_parties - 1 - p);
        }
        const Eigen::Index base = Eigen::Index(scenario_.joint_setting_index(settings)) * no;
        for (Eigen::Index jo = 0; jo < no; ++jo)
            if ((jo & fixed_mask) == fixed_bits) f(base + jo) += y(r);
    }
    return f;
}

LocalPolytope::LocalPolytope(Scenario scenario, std::uint64_t cap)
    : cg_(std::move(scenario)), n_strategies_(strategy_count(cg_.scenario(), cap)) {
    cg_white_ = cg_.white_noise();
    const int rows = int(cg_.rows()) + 1;  // + the v <= 1 cap row
    const int cap_row = rows - 1;

    Eigen::VectorXd b(rows);
    b.head(cg_.rows()) = cg_white_;
    b(cap_row) = 1.0;

    SimplexOptions options;
    options.refactor_interval = std::max(512, rows);
    lp_ = std::make_unique<RevisedSimplex>(rows, std::move(b), options);
    enumerate_strategies(cg_.scenario(), cap,
                         [&](std::uint64_t, const DeterministicStrategy& s) {
                             SparseColumn col;
                             std::vector<int> rws = cg_.strategy_rows(s);
                             col.val.assign(rws.size(), 1.0);
                             col.idx = std::move(rws);
                             lp_->add_column(std::move(col), 0.0);
                         });
    // v column (cg_noise - cg_quantum entries set per solve) and its slack
    SparseColumn vcol;
    vcol.idx.resize(std::size_t(rows));
    vcol.val.assign(std::size_t(rows), 0.0);
    for (int r = 0; r < rows; ++r) vcol.idx[std::size_t(r)] = r;
    vcol.val.back() = 1.0;
    v_col_ = lp_->add_column(std::move(vcol), 1.0);
    w_col_ = lp_->add_column({{cap_row}, {1.0}}, 0.0);
}

VisibilityResult LocalPolytope::max_local_visibility(const Behavior& quantum) {
    return solve(cg_.from_behavior(quantum), cg_white_, true);
}

VisibilityResult LocalPolytope::max_local_visibility(const Behavior& quantum,
                                                     const Behavior& noise) {
    if (!(quantum.scenario() == noise.scenario()))
        throw std::invalid_argument("max_local_visibility: quantum and noise scenarios differ");
    return solve(cg_.from_behavior(quantum), cg_.from_behavior(noise), true);
}

double LocalPolytope::visibility(const Behavior& quantum) {
    return solve(cg_.from_behavior(quantum), cg_white_, false).v_star;
}

VisibilityResult LocalPolytope::solve(const Eigen::VectorXd& cg_quantum,
                                      const Eigen::VectorXd& cg_noise, bool with_certificate) {
    const int rows = lp_->rows();
    SparseColumn vcol;
    vcol.idx.resize(std::size_t(rows));
    vcol.val.resize(std::size_t(rows));
    for (int r = 0; r < rows - 1; ++r) {
        vcol.idx[std::size_t(r)] = r;
        vcol.val[std::size_t(r)] = cg_noise(r) - cg_quantum(r);
    }
    vcol.idx.back() = rows - 1;
    vcol.val.back() = 1.0;
    lp_->update_column(v_col_, std::move(vcol));

    Eigen::VectorXd b(rows);
    b.head(rows - 1) = cg_noise;
    b(rows - 1) = 1.0;
    lp_->set_rhs(std::move(b));

    SimplexSolution sol = lp_->solve();
    if (sol.status == SimplexStatus::numerical_failure ||
        sol.status == SimplexStatus::iteration_limit) {
        // one clean retry from scratch before giving up
        lp_->drop_warm_start();
        sol = lp_->solve();
    }
    if (sol.status == SimplexStatus::infeasible)
        throw SolverError("max_local_visibility: LP reported infeasible, which cannot happen "
                          "(v = 0 is always feasible); treat as numerical failure");
    if (sol.status != SimplexStatus::optimal)
        throw SolverError("max_local_visibility: LP did not converge");

    VisibilityResult result;
    result.v_star = std::clamp(sol.x(v_col_), 0.0, 1.0);
    result.lp_iterations = sol.iterations;
    result.warm_started = sol.warm_started;
    if (!with_certificate) return result;
    for (std::uint64_t s = 0; s < n_strategies_; ++s)
        if (sol.x(Eigen::Index(s)) > 1e-12) result.weights.emplace_back(s, sol.x(Eigen::Index(s)));

    // Certificate from the duals: g = -y on the CG rows satisfies
    // g . cg(D_s) <= 0 for every strategy, and when v* < 1 the value on the
    // noisy behavior is g . cg(B(v)) = v - v*.
    Eigen::VectorXd g = -sol.y.head(rows - 1);
    result.certificate.degenerate = result.v_star >= 1.0 - 1e-9;
    result.certificate.functional = cg_.functional_to_table(g);
    result.certificate.quantum_value = g.dot(cg_quantum);
    double local_bound = -std::numeric_limits<double>::infinity();
    enumerate_strategies(cg_.scenario(), n_strategies_,
                         [&](std::uint64_t, const DeterministicStrategy& s) {
                             double v = 0.0;
                             for (int r : cg_.strategy_rows(s)) v += g(r);
                             local_bound = std::max(local_bound, v);
                         });
    result.certificate.local_bound = local_bound;
    return result;
}

std::pair<bool, BellCertificate> LocalPolytope::is_local(const Behavior& b) {
    VisibilityResult r = max_local_visibility(b);
    return {r.v_star >= 1.0 - 1e-8, r.certificate};
}

} // namespace bellvis
