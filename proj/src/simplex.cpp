#include "bellvis/simplex.hpp"

#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <stdexcept>

namespace bellvis {

RevisedSimplex::RevisedSimplex(int rows, Eigen::VectorXd b, SimplexOptions opts)
    : m_(rows), b_(std::move(b)), opts_(opts) {
    if (b_.size() != m_) throw std::invalid_argument("RevisedSimplex: rhs size mismatch");
    active_b_ = b_;
}

int RevisedSimplex::add_column(SparseColumn col, double cost) {
    for (int r : col.idx)
        if (r < 0 || r >= m_) throw std::invalid_argument("RevisedSimplex: row index out of range");
    cols_.push_back(std::move(col));
    costs_.push_back(cost);
    slot_of_.push_back(-1);
    return int(cols_.size()) - 1;
}

void RevisedSimplex::update_column(int j, SparseColumn col) {
    if (j < 0 || j >= cols()) throw std::invalid_argument("RevisedSimplex: bad column id");
    if (have_basis_ && slot_of_[std::size_t(j)] >= 0) {
        // basic column changed: Sherman-Morrison repair of the dense inverse
        const int slot = slot_of_[std::size_t(j)];
        Eigen::VectorXd delta = Eigen::VectorXd::Zero(m_);
        for (std::size_t k = 0; k < col.idx.size(); ++k) delta(col.idx[k]) += col.val[k];
        const SparseColumn& old = cols_[std::size_t(j)];
        for (std::size_t k = 0; k < old.idx.size(); ++k) delta(old.idx[k]) -= old.val[k];
        const Eigen::VectorXd d = binv_ * delta;
        const double denom = 1.0 + d(slot);
        if (std::abs(denom) < 1e-10) {
            have_basis_ = false;
        } else {
            binv_.noalias() -= d * (binv_.row(slot) / denom);
        }
    }
    cols_[std::size_t(j)] = std::move(col);
}

void RevisedSimplex::set_rhs(Eigen::VectorXd b) {
    if (b.size() != m_) throw std::invalid_argument("RevisedSimplex: rhs size mismatch");
    b_ = std::move(b);
    active_b_ = b_;
}

bool RevisedSimplex::factorize() {
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(m_, m_);
    for (int k = 0; k < m_; ++k) {
        const int j = basis_[std::size_t(k)];
        if (j < 0) {
            basis_matrix(-j - 1, k) = 1.0;
        } else {
            const SparseColumn& col = cols_[std::size_t(j)];
            for (std::size_t t = 0; t < col.idx.size(); ++t)
                basis_matrix(col.idx[t], k) = col.val[t];
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    if (!(lu.rcond() > 1e-14)) return false;
    binv_ = lu.inverse();
    pivots_since_refactor_ = 0;
    return true;
}

void RevisedSimplex::recompute_xb() { xb_.noalias() = binv_ * active_b_; }

double RevisedSimplex::basis_residual() const {
    // || A_B x_B - b ||_inf, cheap consistency check of the maintained inverse
    Eigen::VectorXd r = -active_b_;
    for (int k = 0; k < m_; ++k) {
        const int j = basis_[std::size_t(k)];
        const double x = xb_(k);
        if (x == 0.0) continue;
        if (j < 0) {
            r(-j - 1) += x;
        } else {
            const SparseColumn& col = cols_[std::size_t(j)];
            for (std::size_t t = 0; t < col.idx.size(); ++t) r(col.idx[t]) += x * col.val[t];
        }
    }
    return r.cwiseAbs().maxCoeff();
}

Eigen::VectorXd RevisedSimplex::multiply_binv(const SparseColumn& col) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(m_);
    for (std::size_t t = 0; t < col.idx.size(); ++t) d.noalias() += col.val[t] * binv_.col(col.idx[t]);
    return d;
}

double RevisedSimplex::column_dot(const Eigen::VectorXd& y, int j) const {
    const SparseColumn& col = cols_[std::size_t(j)];
    double s = 0.0;
    for (std::size_t t = 0; t < col.idx.size(); ++t) s += y(col.idx[t]) * col.val[t];
    return s;
}

Eigen::VectorXd RevisedSimplex::dual_y(bool phase1) const {
    Eigen::VectorXd cb(m_);
    for (int k = 0; k < m_; ++k) cb(k) = cost_of(basis_[std::size_t(k)], phase1);
    return binv_.transpose() * cb;
}

int RevisedSimplex::price(const Eigen::VectorXd& y, bool bland, bool phase1) const {
    int best = -1;
    double best_rc = opts_.optimality_tol;
    for (int j = 0; j < cols(); ++j) {
        if (slot_of_[std::size_t(j)] >= 0) continue;
        const double rc = cost_of(j, phase1) - column_dot(y, j);
        if (rc > best_rc) {
            best = j;
            best_rc = rc;
            if (bland) break;
        }
    }
    return best;
}

int RevisedSimplex::ratio_test(const Eigen::VectorXd& d, double& theta) const {
    if (conservative_) {
        // exact min ratio, smallest basis index on ties (Bland-compatible)
        int leave = -1;
        theta = std::numeric_limits<double>::infinity();
        for (int k = 0; k < m_; ++k) {
            if (d(k) <= opts_.pivot_tol) continue;
            const double ratio = std::max(xb_(k), 0.0) / d(k);
            if (ratio < theta - 1e-15) {
                theta = ratio;
                leave = k;
            }
        }
        return leave;
    }
    // Harris two-pass: a bounded feasibility slack buys the freedom to pick
    // large pivot magnitudes, which keeps the basis well conditioned on these
    // heavily degenerate polytopes
    const double slack = 10.0 * opts_.feasibility_tol;
    double theta_max = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m_; ++k) {
        if (d(k) <= opts_.pivot_tol) continue;
        theta_max = std::min(theta_max, (std::max(xb_(k), 0.0) + slack) / d(k));
    }
    if (!std::isfinite(theta_max)) return -1;
    int leave = -1;
    double best_pivot = 0.0;
    bool leave_artificial = false;
    for (int k = 0; k < m_; ++k) {
        if (d(k) <= opts_.pivot_tol) continue;
        if (std::max(xb_(k), 0.0) / d(k) > theta_max) continue;
        const bool artificial = basis_[std::size_t(k)] < 0;
        if (d(k) > best_pivot * (1.0 + 1e-9) ||
            (d(k) > best_pivot * (1.0 - 1e-9) && artificial && !leave_artificial)) {
            leave = k;
            best_pivot = d(k);
            leave_artificial = artificial;
        }
    }
    if (leave >= 0) theta = std::max(xb_(leave), 0.0) / d(leave);
    return leave;
}

void RevisedSimplex::pivot(int entering, int leaving_slot, const Eigen::VectorXd& d, double theta) {
    const int leaving = basis_[std::size_t(leaving_slot)];
    if (leaving >= 0) slot_of_[std::size_t(leaving)] = -1;
    basis_[std::size_t(leaving_slot)] = entering;
    slot_of_[std::size_t(entering)] = leaving_slot;

    xb_.noalias() -= theta * d;
    xb_(leaving_slot) = theta;

    // E^{-1} B^{-1} as a rank-one update: subtract (d - e_slot) times the
    // rescaled pivot row (keeps the update a single dense GER)
    const Eigen::RowVectorXd pivot_row = binv_.row(leaving_slot) / d(leaving_slot);
    Eigen::VectorXd u = d;
    u(leaving_slot) = d(leaving_slot) - 1.0;
    binv_.noalias() -= u * pivot_row;
    ++pivots_since_refactor_;
}

bool RevisedSimplex::run_phase(bool phase1, int& iterations) {
    int degenerate_streak = 0;
    bool bland = conservative_;
    while (true) {
        if (iterations >= opts_.max_iterations) return false;
        if (pivots_since_refactor_ >= opts_.refactor_interval) {
            if (!factorize()) {
                if (std::getenv("BELLVIS_LP_DEBUG"))
                    std::fprintf(stderr, "[lp] periodic refactor failed (singular basis)\n");
                return false;
            }
            recompute_xb();
        }
        const Eigen::VectorXd y = dual_y(phase1);
        const int entering = price(y, bland, phase1);
        if (entering < 0) return true;  // phase optimal
        const Eigen::VectorXd d = multiply_binv(cols_[std::size_t(entering)]);
        double theta = 0.0;
        const int leaving = ratio_test(d, theta);
        if (leaving < 0) {
            // no positive direction entry: a genuinely improving column would
            // make the LP unbounded (impossible with the v cap), so this is
            // pricing noise on a degenerate basis
            const double rc = cost_of(entering, phase1) - column_dot(y, entering);
            if (rc >= 1e-6 && std::getenv("BELLVIS_LP_DEBUG"))
                std::fprintf(stderr, "[lp] unbounded direction rc=%g col=%d\n", rc, entering);
            return rc < 1e-6;
        }
        pivot(entering, leaving, d, theta);
        ++iterations;
        if (theta <= 1e-11) {
            if (++degenerate_streak > 80) bland = true;
        } else {
            degenerate_streak = 0;
            bland = conservative_;
        }
    }
}

bool RevisedSimplex::dual_repair(int& iterations) {
    // applicable only while the duals stay feasible (all reduced costs <= 0)
    Eigen::VectorXd y = dual_y(false);
    double worst_rc = 0.0;
    for (int j = 0; j < cols(); ++j) {
        if (slot_of_[std::size_t(j)] >= 0) continue;
        worst_rc = std::max(worst_rc, cost_of(j, false) - column_dot(y, j));
    }
    if (worst_rc > 1e-7) return false;

    const int cap = std::min(150, 2 * m_);
    double best_infeasibility = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int step = 0; step < cap; ++step) {
        if (iterations >= opts_.max_iterations) return false;
        int leave = -1;
        double most_negative = -opts_.feasibility_tol;
        double infeasibility = 0.0;
        for (int k = 0; k < m_; ++k) {
            if (xb_(k) < 0.0) infeasibility -= xb_(k);
            if (xb_(k) < most_negative) {
                most_negative = xb_(k);
                leave = k;
            }
        }
        if (leave < 0) return true;  // primal feasible again
        // bail out when degenerate pivots stop making progress
        if (infeasibility < best_infeasibility - 1e-12) {
            best_infeasibility = infeasibility;
            stalled = 0;
        } else if (++stalled > 25) {
            return false;
        }

        // two-pass entering choice: find the min dual ratio over well-scaled
        // pivots, then take the largest |alpha| within a small ratio window;
        // tiny pivot magnitudes would blow the primal point up
        const Eigen::VectorXd row = binv_.row(leave);
        std::vector<std::pair<int, double>> candidates;  // (column, alpha)
        for (int j = 0; j < cols(); ++j) {
            if (slot_of_[std::size_t(j)] >= 0) continue;
            const double alpha = column_dot(row, j);
            if (alpha < -1e-7) candidates.emplace_back(j, alpha);
        }
        if (candidates.empty()) return false;
        double min_ratio = std::numeric_limits<double>::infinity();
        std::vector<double> ratios(candidates.size());
        for (std::size_t t = 0; t < candidates.size(); ++t) {
            const double rc = cost_of(candidates[t].first, false) - column_dot(y, candidates[t].first);
            ratios[t] = std::min(rc, 0.0) / candidates[t].second;
            min_ratio = std::min(min_ratio, ratios[t]);
        }
        int entering = -1;
        double best_alpha = 0.0;
        for (std::size_t t = 0; t < candidates.size(); ++t) {
            if (ratios[t] <= min_ratio + 1e-9 && std::abs(candidates[t].second) > std::abs(best_alpha)) {
                best_alpha = candidates[t].second;
                entering = candidates[t].first;
            }
        }
        if (entering < 0) return false;

        const Eigen::VectorXd d = multiply_binv(cols_[std::size_t(entering)]);
        if (std::abs(d(leave)) < 1e-9) return false;
        const double theta = xb_(leave) / d(leave);
        if (!(std::abs(theta) < 1e9)) return false;
        pivot(entering, leave, d, theta);
        ++iterations;
        y = dual_y(false);
    }
    return false;
}

bool RevisedSimplex::expel_artificials() {
    for (int k = 0; k < m_; ++k) {
        if (basis_[std::size_t(k)] >= 0) continue;
        if (std::abs(xb_(k)) > 10.0 * opts_.feasibility_tol) return false;
        // degenerate pivot on the stablest structural column for this row
        int best = -1;
        double best_abs = 1e-7;
        Eigen::VectorXd best_d;
        for (int j = 0; j < cols(); ++j) {
            if (slot_of_[std::size_t(j)] >= 0) continue;
            const double pivot_val = column_dot(binv_.row(k).transpose(), j);
            if (std::abs(pivot_val) > best_abs) {
                best = j;
                best_abs = std::abs(pivot_val);
            }
        }
        if (best < 0) continue;  // redundant row; artificial stays pinned at zero
        Eigen::VectorXd d = multiply_binv(cols_[std::size_t(best)]);
        xb_(k) = 0.0;
        pivot(best, k, d, 0.0);
    }
    return true;
}

SimplexSolution RevisedSimplex::solve() {
    SimplexSolution sol;
    sol.x = Eigen::VectorXd::Zero(cols());

    bool warm = false;
    int iterations = 0;
    active_b_ = b_;
    if (have_basis_) {
        recompute_xb();
        if (xb_.minCoeff() >= -opts_.feasibility_tol) {
            warm = true;
        } else if (dual_repair(iterations)) {
            warm = true;
        } else if (factorize()) {
            recompute_xb();
            warm = xb_.minCoeff() >= -opts_.feasibility_tol || dual_repair(iterations);
        }
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
        conservative_ = attempt > 0;
        if (!warm) {
            active_b_ = b_;
            basis_.assign(std::size_t(m_), 0);
            std::fill(slot_of_.begin(), slot_of_.end(), -1);
            for (int k = 0; k < m_; ++k) basis_[std::size_t(k)] = -k - 1;
            binv_ = Eigen::MatrixXd::Identity(m_, m_);
            pivots_since_refactor_ = 0;
            recompute_xb();
            if (!run_phase(true, iterations)) {
                if (std::getenv("BELLVIS_LP_DEBUG"))
                    std::fprintf(stderr, "[lp] phase1 fail iters=%d attempt=%d\n", iterations, attempt);
                have_basis_ = false;
                sol.status = iterations >= opts_.max_iterations ? SimplexStatus::iteration_limit
                                                                : SimplexStatus::numerical_failure;
                return sol;
            }
            double infeas = 0.0;
            for (int k = 0; k < m_; ++k)
                if (basis_[std::size_t(k)] < 0) infeas += std::max(xb_(k), 0.0);
            if (infeas > 1e2 * opts_.feasibility_tol * (1.0 + b_.cwiseAbs().sum())) {
                if (std::getenv("BELLVIS_LP_DEBUG"))
                    std::fprintf(stderr, "[lp] phase1 infeasible infeas=%g attempt=%d\n", infeas, attempt);
                have_basis_ = false;
                sol.status = SimplexStatus::infeasible;
                return sol;
            }
            expel_artificials();
        }

        have_basis_ = true;
        bool ok = run_phase(false, iterations);
        if (ok && basis_residual() > 1e-8 * (1.0 + b_.cwiseAbs().maxCoeff())) {
            // accumulated update error: refactorize and polish
            if (!factorize()) {
                have_basis_ = false;
                sol.status = SimplexStatus::numerical_failure;
                return sol;
            }
            recompute_xb();
            ok = run_phase(false, iterations);
        }
        if (!ok) {
            if (std::getenv("BELLVIS_LP_DEBUG"))
                std::fprintf(stderr, "[lp] phase2 fail warm=%d iters=%d attempt=%d\n", int(warm),
                             iterations, attempt);
            have_basis_ = false;
            sol.status = iterations >= opts_.max_iterations ? SimplexStatus::iteration_limit
                                                            : SimplexStatus::numerical_failure;
            return sol;
        }
        if (xb_.minCoeff() >= -1e3 * opts_.feasibility_tol) break;
        // drifted infeasible: redo cold once
        if (attempt == 1) {
            have_basis_ = false;
            sol.status = SimplexStatus::numerical_failure;
            return sol;
        }
        warm = false;
    }

    if (std::getenv("BELLVIS_LP_DEBUG"))
        std::fprintf(stderr, "[lp] warm=%d iters=%d\n", int(warm), iterations);
    conservative_ = false;
    sol.status = SimplexStatus::optimal;
    sol.warm_started = warm;
    sol.iterations = iterations;
    for (int k = 0; k < m_; ++k) {
        const int j = basis_[std::size_t(k)];
        if (j >= 0) sol.x(j) = xb_(k);
    }
    sol.objective = 0.0;
    for (int j = 0; j < cols(); ++j) sol.objective += costs_[std::size_t(j)] * sol.x(j);
    sol.y = dual_y(false);
    return sol;
}

} // namespace bellvis
