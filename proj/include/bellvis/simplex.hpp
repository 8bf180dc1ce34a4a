#pragma once

#include <vector>

#include <Eigen/Dense>

namespace bellvis {

struct SparseColumn {
    std::vector<int> idx;
    std::vector<double> val;
};

struct SimplexOptions {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-10;
    int max_iterations = 2000000;
    int refactor_interval = 256;
};

enum class SimplexStatus { optimal, infeasible, iteration_limit, numerical_failure };

struct SimplexSolution {
    SimplexStatus status = SimplexStatus::numerical_failure;
    double objective = 0.0;
    Eigen::VectorXd x;  // structural variables
    Eigen::VectorXd y;  // row multipliers c_B^T B^{-1} at the final basis
    int iterations = 0;
    bool warm_started = false;
};

// Revised primal simplex for
//     max c'x   s.t.   A x = b,  x >= 0,
// with A stored column-wise sparse and an explicit dense basis inverse that
// is rank-one updated per pivot and refactorized periodically. Two-phase
// start from an all-artificial basis; Dantzig pricing with a Bland fallback
// after degenerate streaks.
//
// Columns may be replaced between solves (update_column); when the previous
// optimal basis is still usable it is repaired via Sherman-Morrison and the
// next solve warm starts from it.
class RevisedSimplex {
public:
    RevisedSimplex(int rows, Eigen::VectorXd b, SimplexOptions opts = {});

    int add_column(SparseColumn col, double cost);
    void update_column(int j, SparseColumn col);
    void set_rhs(Eigen::VectorXd b);

    int rows() const { return m_; }
    int cols() const { return int(cols_.size()); }

    SimplexSolution solve();
    void drop_warm_start() { have_basis_ = false; }

private:
    // basis entries: j >= 0 structural column, j < 0 artificial for row -j-1
    bool factorize();
    void recompute_xb();
    double basis_residual() const;
    Eigen::VectorXd multiply_binv(const SparseColumn& col) const;
    double column_dot(const Eigen::VectorXd& y, int j) const;
    int price(const Eigen::VectorXd& y, bool bland, bool phase1) const;
    int ratio_test(const Eigen::VectorXd& d, double& theta) const;
    void pivot(int entering, int leaving_slot, const Eigen::VectorXd& d, double theta);
    bool run_phase(bool phase1, int& iterations);
    // dual simplex repair: restores primal feasibility from a dual-feasible
    // basis after a column/rhs update; returns false when not applicable
    bool dual_repair(int& iterations);
    bool expel_artificials();
    double cost_of(int j, bool phase1) const {
        if (phase1) return j < 0 ? -1.0 : 0.0;
        return j < 0 ? 0.0 : costs_[std::size_t(j)];
    }
    Eigen::VectorXd dual_y(bool phase1) const;

    int m_;
    Eigen::VectorXd b_;
    Eigen::VectorXd active_b_;  // b_ or its anti-degeneracy perturbation
    SimplexOptions opts_;
    std::vector<SparseColumn> cols_;
    std::vector<double> costs_;

    std::vector<int> basis_;
    std::vector<int> slot_of_;  // structural column -> basis slot, -1 if nonbasic
    Eigen::MatrixXd binv_;
    Eigen::VectorXd xb_;
    bool have_basis_ = false;
    bool conservative_ = false;  // retry mode: Bland pricing + exact ratios
    int pivots_since_refactor_ = 0;
};

} // namespace bellvis
