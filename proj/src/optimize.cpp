#include "bellvis/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "bellvis/bell_expression.hpp"
#include "bellvis/nelder_mead.hpp"
#include "bellvis/util.hpp"

namespace bellvis {

namespace {

int total_settings(const Scenario& scenario) {
    int total = 0;
    for (int m : scenario.settings_per_party) total += m;
    return total;
}

std::pair<double, double> direction_angles(const Eigen::Vector3d& n) {
    const Eigen::Vector3d u = n.normalized();
    return {std::acos(std::clamp(u.z(), -1.0, 1.0)), std::atan2(u.y(), u.x())};
}

MeasurementSetting projective_along(const Eigen::Vector3d& axis) {
    auto [theta, phi] = direction_angles(axis);
    return MeasurementSetting::projective(theta, phi);
}

// Per-qubit reduced Bloch vector, used to seed product-like parties at +-z.
Eigen::Vector3d reduced_bloch(const PureState& state, int party) {
    NoisyState pure(state, 1.0);
    Eigen::Vector3d r;
    const Eigen::Vector3d axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int a = 0; a < 3; ++a) {
        std::vector<SiteObservable> sites(std::size_t(state.n_qubits()), SiteObservable::identity());
        sites[std::size_t(party)] = SiteObservable::bloch(axes[a]);
        r(a) = expectation(pure, sites);
    }
    return r;
}

// Canonical (unjittered) start vectors per family; jitter and fully random
// starts are layered on by the restart schedule.
Eigen::VectorXd family_start(const std::string& family, const PureState& state,
                             const Scenario& scenario, SeededRng& rng) {
    const int n = scenario.n_parties;
    Eigen::VectorXd angles(2 * total_settings(scenario));
    int at = 0;
    auto put = [&](double theta, double phi) {
        angles(2 * at) = theta;
        angles(2 * at + 1) = phi;
        ++at;
    };

    if (family == "random") {
        for (int p = 0; p < n; ++p)
            for (int s = 0; s < scenario.settings_per_party[std::size_t(p)]; ++s)
                put(std::acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, 2.0 * M_PI));
        return angles;
    }
    if (family == "xy-plane") {
        // equatorial pattern, quarter-turn between own settings; the last
        // party carries the -pi/4 offset that tilts Mermin into Ardehali
        for (int p = 0; p < n; ++p)
            for (int s = 0; s < scenario.settings_per_party[std::size_t(p)]; ++s)
                put(M_PI / 2.0, s * (M_PI / 2.0) - (p == n - 1 ? M_PI / 4.0 : 0.0));
        return angles;
    }
    if (family == "xz-plane") {
        for (int p = 0; p < n; ++p)
            for (int s = 0; s < scenario.settings_per_party[std::size_t(p)]; ++s)
                put(M_PI / 4.0 + s * (M_PI / 2.0), 0.0);
        return angles;
    }
    if (family == "paper-dicke") {
        // parties 0,1 run the CHSH block, everyone else projects onto |0>
        for (int p = 0; p < n; ++p) {
            for (int s = 0; s < scenario.settings_per_party[std::size_t(p)]; ++s) {
                if (p == 0) put(M_PI / 2.0, (s % 2) * (M_PI / 2.0));
                else if (p == 1) put(M_PI / 2.0, (s % 2 == 0) ? M_PI / 4.0 : -M_PI / 4.0);
                else put(M_PI, 0.0);
            }
        }
        return angles;
    }
    if (family == "z-aligned") {
        // parties whose marginal is near-pure project onto it; the rest get
        // the equatorial pattern
        for (int p = 0; p < n; ++p) {
            const Eigen::Vector3d r = reduced_bloch(state, p);
            for (int s = 0; s < scenario.settings_per_party[std::size_t(p)]; ++s) {
                if (r.norm() > 0.9) {
                    auto [theta, phi] = direction_angles(-r);  // outcome 1 fires on |r>
                    put(theta, phi);
                } else {
                    put(M_PI / 2.0, s * (M_PI / 2.0) - (p == n - 1 ? M_PI / 4.0 : 0.0));
                }
            }
        }
        return angles;
    }
    throw std::invalid_argument("optimize_settings: unknown hint family '" + family + "'");
}

struct RestartOutcome {
    double value = 2.0;
    Eigen::VectorXd angles;
    bool converged = false;
};

// v*(angles) for a fixed state, with a reusable warm-started LP underneath
class VisibilityObjective {
public:
    VisibilityObjective(const PureState& state, const Scenario& scenario, std::uint64_t cap)
        : state_(state, 1.0), scenario_(scenario), polytope_(scenario, cap) {}

    double operator()(const Eigen::VectorXd& angles) {
        const double v = polytope_.visibility(
            joint_probabilities(state_, unpack_settings(scenario_, angles)));
        if (v < best_value_) {
            best_value_ = v;
            best_angles_ = angles;
        }
        return v;
    }

    double best_value() const { return best_value_; }
    const Eigen::VectorXd& best_angles() const { return best_angles_; }

private:
    NoisyState state_;
    Scenario scenario_;
    LocalPolytope polytope_;
    double best_value_ = 2.0;
    Eigen::VectorXd best_angles_;
};

// Static stride partition of restart indices over threads; each restart is
// self-contained and seeded by (seed, restart), so results do not depend on
// the thread count.
template <typename Fn>
void run_restarts(int restarts, int threads, Fn&& body) {
    int n_threads = threads > 0 ? threads : int(std::thread::hardware_concurrency());
    n_threads = std::clamp(n_threads, 1, std::max(1, restarts));
    if (n_threads == 1) {
        for (int r = 0; r < restarts; ++r) body(r);
        return;
    }
    std::vector<std::exception_ptr> errors;
    errors.resize(std::size_t(n_threads));
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (int r = t; r < restarts; r += n_threads) body(r);
            } catch (...) {
                errors[std::size_t(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<std::string> start_families(const OptimizationConfig& cfg) {
    if (cfg.hints.empty()) return {"z-aligned", "xy-plane", "xz-symmetric", "paper-dicke", "xz-plane"};
    return cfg.hints;
}

struct RestartStart {
    std::string family;
    Eigen::VectorXd angles;
    double jitter = 0.0;
};

RestartStart restart_start(int r, const std::vector<std::string>& families,
                           const PureState& state, const Scenario& scenario,
                           const OptimizationConfig& cfg) {
    SeededRng rng(derive_seed(cfg.seed, std::uint64_t(r)));
    RestartStart out;
    const int nf = int(families.size());
    if (r < nf) {
        out.family = families[std::size_t(r)];
        out.angles = family_start(out.family == "xz-symmetric" ? "xz-plane" : out.family, state,
                                  scenario, rng);
        return out;
    }
    const int k = r - nf;
    if (k % 5 == 4) {
        out.family = "random";
        out.angles = family_start("random", state, scenario, rng);
        return out;
    }
    out.family = families[std::size_t(k % nf)];
    out.angles = family_start(out.family == "xz-symmetric" ? "xz-plane" : out.family, state,
                              scenario, rng);
    out.jitter = std::min(0.2 + 0.1 * (k / 5), 0.6);
    for (Eigen::Index i = 0; i < out.angles.size(); ++i) out.angles(i) += out.jitter * rng.normal();
    return out;
}

// Shared-angle pre-search in the xz plane: every party uses the same
// (theta_0 .. theta_{m-1}) settings. Dicke-type optima live in this subspace,
// and a 2-3 dim search locates them far more reliably than the full-
// dimensional descent, which then only has to polish.
Eigen::VectorXd symmetric_presearch(VisibilityObjective& objective, const Scenario& scenario,
                                    double jitter, SeededRng& rng, int iterations) {
    int max_settings = 0;
    for (int m : scenario.settings_per_party) max_settings = std::max(max_settings, m);
    auto broadcast = [&](const Eigen::VectorXd& shared) {
        Eigen::VectorXd angles(2 * total_settings(scenario));
        int at = 0;
        for (int p = 0; p < scenario.n_parties; ++p)
            for (int s = 0; s < scenario.settings_per_party[std::size_t(p)]; ++s) {
                angles(2 * at) = shared(s);
                angles(2 * at + 1) = 0.0;
                ++at;
            }
        return angles;
    };
    std::vector<Eigen::VectorXd> seeds;
    {
        Eigen::VectorXd a(max_settings), b(max_settings), c(max_settings);
        for (int s = 0; s < max_settings; ++s) {
            a(s) = M_PI / 4.0 + s * (M_PI / 2.0);
            b(s) = (s == 0) ? M_PI : M_PI / 2.0;
            c(s) = rng.uniform(0.0, M_PI);
        }
        seeds = {a, b, c};
    }
    Eigen::VectorXd best_shared = seeds.front();
    double best_value = std::numeric_limits<double>::infinity();
    for (Eigen::VectorXd seed : seeds) {
        if (jitter > 0.0)
            for (Eigen::Index i = 0; i < seed.size(); ++i) seed(i) += jitter * rng.normal();
        NelderMeadResult nm = nelder_mead(
            [&](const Eigen::VectorXd& shared) { return objective(broadcast(shared)); }, seed, 0.25,
            1e-9, iterations);
        if (nm.value < best_value) {
            best_value = nm.value;
            best_shared = nm.x;
        }
    }
    return broadcast(best_shared);
}

} // namespace

std::vector<std::vector<MeasurementSetting>> unpack_settings(const Scenario& scenario,
                                                             const Eigen::VectorXd& angles) {
    if (angles.size() != 2 * total_settings(scenario))
        throw std::invalid_argument("unpack_settings: angle vector length mismatch");
    std::vector<std::vector<MeasurementSetting>> settings(std::size_t(scenario.n_parties));
    int at = 0;
    for (int p = 0; p < scenario.n_parties; ++p) {
        for (int s = 0; s < scenario.settings_per_party[std::size_t(p)]; ++s) {
            settings[std::size_t(p)].push_back(
                MeasurementSetting::projective(angles(2 * at), angles(2 * at + 1)));
            ++at;
        }
    }
    return settings;
}

Eigen::VectorXd pack_settings(const Scenario& scenario,
                              const std::vector<std::vector<MeasurementSetting>>& settings) {
    Eigen::VectorXd angles(2 * total_settings(scenario));
    int at = 0;
    for (int p = 0; p < scenario.n_parties; ++p) {
        for (int s = 0; s < scenario.settings_per_party[std::size_t(p)]; ++s) {
            const MeasurementSetting& ms = settings[std::size_t(p)][std::size_t(s)];
            if (!ms.is_projective())
                throw std::invalid_argument("pack_settings: constant settings have no angles");
            angles(2 * at) = ms.theta;
            angles(2 * at + 1) = ms.phi;
            ++at;
        }
    }
    return angles;
}

CriticalVisibilityEstimate optimize_settings(const PureState& state, const Scenario& scenario,
                                             const OptimizationConfig& cfg) {
    if (scenario.n_parties != state.n_qubits())
        throw std::invalid_argument("optimize_settings: scenario party count must equal qubit count");
    if (cfg.restarts < 1) throw std::invalid_argument("optimize_settings: restarts must be >= 1");
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("optimize_settings: tolerance must be > 0");
    strategy_count(scenario, cfg.strategy_cap);  // refuse oversized scenarios up front

    const std::vector<std::string> families = start_families(cfg);
    for (const auto& f : families) {
        if (f != "xy-plane" && f != "xz-plane" && f != "xz-symmetric" && f != "paper-dicke" &&
            f != "z-aligned" && f != "random")
            throw std::invalid_argument("optimize_settings: unknown hint family '" + f + "'");
    }

    std::vector<RestartOutcome> outcomes(std::size_t(cfg.restarts));
    run_restarts(cfg.restarts, cfg.threads, [&](int r) {
        VisibilityObjective objective(state, scenario, cfg.strategy_cap);
        RestartStart start = restart_start(r, families, state, scenario, cfg);
        if (start.family == "xz-symmetric") {
            SeededRng rng(derive_seed(cfg.seed, 40000 + std::uint64_t(r)));
            start.angles = symmetric_presearch(objective, scenario, start.jitter, rng,
                                               std::min(cfg.max_iterations, 200));
        }
        NelderMeadResult nm = nelder_mead([&](const Eigen::VectorXd& x) { return objective(x); },
                                          start.angles, 0.3, cfg.tolerance, cfg.max_iterations);
        RestartOutcome& out = outcomes[std::size_t(r)];
        out.value = objective.best_value();
        out.angles = objective.best_angles();
        out.converged = nm.converged;
    });

    int best = 0;
    for (int r = 1; r < cfg.restarts; ++r)
        if (outcomes[std::size_t(r)].value < outcomes[std::size_t(best)].value) best = r;

    CriticalVisibilityEstimate estimate;
    estimate.seed = cfg.seed;
    estimate.best_restart = best;
    estimate.converged = outcomes[std::size_t(best)].converged;
    for (const auto& o : outcomes)
        if (std::abs(o.value - outcomes[std::size_t(best)].value) <= 1e-4) ++estimate.restarts_agreeing;

    estimate.best_settings = unpack_settings(scenario, outcomes[std::size_t(best)].angles);
    LocalPolytope polytope(scenario, cfg.strategy_cap);
    VisibilityResult final_solve = polytope.max_local_visibility(
        joint_probabilities(NoisyState(state, 1.0), estimate.best_settings));
    estimate.v_crit = final_solve.v_star;
    estimate.certificate = final_solve.certificate;
    return estimate;
}

std::pair<PureState, CriticalVisibilityEstimate> optimize_state_and_settings(
    int n, const Scenario& scenario, const OptimizationConfig& cfg) {
    if (scenario.n_parties != n)
        throw std::invalid_argument("optimize_state_and_settings: scenario/qubit count mismatch");
    if (n > cfg.max_seesaw_qubits)
        throw std::invalid_argument(
            "optimize_state_and_settings: qubit count exceeds the configured see-saw cap");
    strategy_count(scenario, cfg.strategy_cap);

    struct SeesawOutcome {
        double value = 2.0;
        StateVector amplitudes;
        Eigen::VectorXd angles;
    };
    const Eigen::Index dim = Eigen::Index(1) << n;
    std::vector<SeesawOutcome> outcomes(std::size_t(cfg.restarts));

    run_restarts(cfg.restarts, cfg.threads, [&](int r) {
        PureState state = random_pure_state(n, derive_seed(cfg.seed, 7000 + std::uint64_t(r)));
        OptimizationConfig inner = cfg;
        inner.restarts = 3;
        inner.threads = 1;
        inner.seed = derive_seed(cfg.seed, 100 + std::uint64_t(r));

        SeesawOutcome& out = outcomes[std::size_t(r)];
        double previous = 2.0;
        Eigen::VectorXd angles;
        for (int round = 0; round < 6; ++round) {
            CriticalVisibilityEstimate est = optimize_settings(state, scenario, inner);
            angles = pack_settings(scenario, est.best_settings);
            double v_round = est.v_crit;

            // amplitude sweep at fixed settings
            const auto settings = est.best_settings;
            LocalPolytope polytope(scenario, cfg.strategy_cap);
            StateVector best_amps = state.amplitudes();
            double best_v = v_round;
            auto state_objective = [&](const Eigen::VectorXd& x) {
                StateVector amps(dim);
                for (Eigen::Index i = 0; i < dim; ++i) amps(i) = Complex(x(2 * i), x(2 * i + 1));
                const double nrm = amps.norm();
                if (nrm < 1e-9) return 1.0;
                amps /= nrm;
                const double v = polytope.visibility(
                    joint_probabilities(NoisyState(PureState(n, amps), 1.0), settings));
                if (v < best_v) {
                    best_v = v;
                    best_amps = amps;
                }
                return v;
            };
            Eigen::VectorXd x0(2 * dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                x0(2 * i) = state.amplitudes()(i).real();
                x0(2 * i + 1) = state.amplitudes()(i).imag();
            }
            nelder_mead(state_objective, x0, 0.15, cfg.tolerance, cfg.max_iterations);
            state = PureState(n, best_amps);

            if (previous - best_v < 10.0 * cfg.tolerance) {
                previous = best_v;
                break;
            }
            previous = best_v;
        }
        out.value = previous;
        out.amplitudes = state.amplitudes();
        out.angles = angles;
    });

    int best = 0;
    for (int r = 1; r < cfg.restarts; ++r)
        if (outcomes[std::size_t(r)].value < outcomes[std::size_t(best)].value) best = r;

    PureState best_state(n, outcomes[std::size_t(best)].amplitudes);
    OptimizationConfig polish = cfg;
    polish.restarts = std::min(cfg.restarts, 6);
    polish.seed = derive_seed(cfg.seed, 999);
    CriticalVisibilityEstimate estimate = optimize_settings(best_state, scenario, polish);
    return {std::move(best_state), std::move(estimate)};
}

namespace {

// <m| rows for the projected parties; outcome "1" of the constructed
// first setting fires exactly on |m>
Eigen::Vector2cd projection_bra(double theta, double phi) {
    return {Complex(std::cos(theta / 2.0), 0.0),
            std::exp(Complex(0.0, -phi)) * std::sin(theta / 2.0)};
}

struct PairProjection {
    Eigen::Vector4cd pair;          // unnormalized
    double success = 0.0;
};

PairProjection project_to_pair(const PureState& state, int keep_i, int keep_j,
                               const std::vector<int>& others, const Eigen::VectorXd& angles) {
    PairProjection out;
    out.pair.setZero();
    const int n = state.n_qubits();
    for (Eigen::Index idx = 0; idx < state.dim(); ++idx) {
        Complex amp = state.amplitude(idx);
        if (amp == Complex(0.0, 0.0)) continue;
        for (std::size_t k = 0; k < others.size(); ++k) {
            const Eigen::Vector2cd bra = projection_bra(angles(2 * Eigen::Index(k)),
                                                        angles(2 * Eigen::Index(k) + 1));
            amp *= bra(state.qubit_bit(idx, others[k]));
        }
        const int slot = (state.qubit_bit(idx, keep_i) << 1) | state.qubit_bit(idx, keep_j);
        out.pair(slot) += amp;
    }
    (void)n;
    out.success = out.pair.squaredNorm();
    return out;
}

} // namespace

ProjectionResult max_entangling_projections(const PureState& state, std::pair<int, int> keep,
                                            const OptimizationConfig& cfg) {
    const int n = state.n_qubits();
    if (n < 3) throw std::invalid_argument("max_entangling_projections: need at least 3 qubits");
    if (keep.first == keep.second || keep.first < 0 || keep.second < 0 || keep.first >= n ||
        keep.second >= n)
        throw std::invalid_argument("max_entangling_projections: bad party pair");

    std::vector<int> others;
    for (int p = 0; p < n; ++p)
        if (p != keep.first && p != keep.second) others.push_back(p);
    const Eigen::Index dims = 2 * Eigen::Index(others.size());

    bool any_success = false;
    double best_concurrence = -1.0;
    Eigen::VectorXd best_angles = Eigen::VectorXd::Zero(dims);

    auto objective = [&](const Eigen::VectorXd& angles) {
        const PairProjection proj = project_to_pair(state, keep.first, keep.second, others, angles);
        if (proj.success < 1e-15) return 0.0;
        const Eigen::Vector4cd normalized = proj.pair / std::sqrt(proj.success);
        return -2.0 * std::abs(normalized(0) * normalized(3) - normalized(1) * normalized(2));
    };

    const int trials = std::clamp(cfg.restarts, 3, 8);
    for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXd start(dims);
        if (trial == 0) {
            start.setZero();  // project everyone onto |0>
        } else if (trial == 1) {
            for (Eigen::Index k = 0; k < Eigen::Index(others.size()); ++k) {
                start(2 * k) = M_PI / 2.0;  // |+>
                start(2 * k + 1) = 0.0;
            }
        } else {
            SeededRng rng(derive_seed(cfg.seed, 500 + std::uint64_t(trial)));
            for (Eigen::Index k = 0; k < Eigen::Index(others.size()); ++k) {
                start(2 * k) = std::acos(rng.uniform(-1.0, 1.0));
                start(2 * k + 1) = rng.uniform(0.0, 2.0 * M_PI);
            }
        }
        NelderMeadResult nm = nelder_mead(objective, start, 0.4, 1e-10, 300);
        const PairProjection proj = project_to_pair(state, keep.first, keep.second, others, nm.x);
        if (proj.success >= 1e-12) any_success = true;
        const double c = -nm.value;
        if (c > best_concurrence && proj.success >= 1e-12) {
            best_concurrence = c;
            best_angles = nm.x;
        }
    }

    ProjectionResult result;
    if (!any_success) {
        result.failed = true;
        result.pair_state = StateVector::Zero(4);
        return result;
    }
    const PairProjection proj = project_to_pair(state, keep.first, keep.second, others, best_angles);
    result.success_probability = proj.success;
    const Eigen::Vector4cd normalized = proj.pair / std::sqrt(proj.success);
    result.pair_state = normalized;
    result.concurrence = std::max(best_concurrence, 0.0);
    for (std::size_t k = 0; k < others.size(); ++k) {
        const double theta = best_angles(2 * Eigen::Index(k)), phi = best_angles(2 * Eigen::Index(k) + 1);
        result.directions.emplace_back(std::sin(theta) * std::cos(phi),
                                       std::sin(theta) * std::sin(phi), std::cos(theta));
    }
    return result;
}

ViolationReport check_pure_entangled_violation(const PureState& state,
                                               const OptimizationConfig& cfg) {
    const int n = state.n_qubits();
    if (n < 3)
        throw std::invalid_argument("check_pure_entangled_violation: need at least 3 qubits");
    const BellExpression expr = symmetrized_ch_expression(n);

    ViolationReport best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const ProjectionResult proj = max_entangling_projections(state, {i, j}, cfg);
            if (proj.failed) continue;
            const ChshSettings chsh = optimal_chsh_settings(PureState(2, proj.pair_state));

            std::vector<std::vector<MeasurementSetting>> settings;
            settings.resize(std::size_t(n));
            int other_at = 0;
            for (int p = 0; p < n; ++p) {
                if (p == i) {
                    settings[std::size_t(p)] = {MeasurementSetting::constant(0),
                                                projective_along(chsh.a0), projective_along(chsh.a1)};
                } else if (p == j) {
                    settings[std::size_t(p)] = {MeasurementSetting::constant(0),
                                                projective_along(chsh.b0), projective_along(chsh.b1)};
                } else {
                    // outcome 1 must fire on the successful projection |m>,
                    // so the observable points along -m
                    const MeasurementSetting ms =
                        projective_along(-proj.directions[std::size_t(other_at)]);
                    ++other_at;
                    settings[std::size_t(p)] = {ms, ms, ms};
                }
            }
            const double value =
                expr.evaluate(joint_probabilities(NoisyState(state, 1.0), settings));
            if (value > best.value) {
                best.value = value;
                best.pair = {i, j};
                best.settings = settings;
                best.pair_concurrence = proj.concurrence;
                best.success_probability = proj.success_probability;
            }
        }
    }
    if (!std::isfinite(best.value)) best.value = 0.0;  // every branch degenerate
    best.violated = best.value > 1e-9;
    return best;
}

} // namespace bellvis
