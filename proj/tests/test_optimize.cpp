#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bellvis/formulas.hpp"
#include "bellvis/optimize.hpp"
#include "bellvis/util.hpp"

using namespace bellvis;

namespace {

OptimizationConfig quick_config(int restarts, std::uint64_t seed) {
    OptimizationConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("ghz2 settings optimization reaches the chsh threshold") {
    const auto est = optimize_settings(ghz_state(2), Scenario(2, 2), quick_config(6, 3));
    CHECK(est.v_crit == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(5e-4));
    CHECK(est.restarts_agreeing >= 1);
    CHECK(est.best_settings.size() == 2);
}

TEST_CASE("ghz3 with the xy hint") {
    OptimizationConfig cfg = quick_config(4, 5);
    cfg.hints = {"xy-plane"};
    const auto est = optimize_settings(ghz_state(3), Scenario(3, 2), cfg);
    CHECK(est.v_crit == doctest::Approx(0.5).epsilon(5e-4));
    // monotone improvement over the hint: the hint family itself realizes 0.5
    CHECK(est.v_crit <= 0.5 + 1e-6);
}

TEST_CASE("w3 settings optimization") {
    const auto est = optimize_settings(dicke_state(3, 1), Scenario(3, 2), quick_config(8, 7));
    CHECK(est.v_crit == doctest::Approx(dicke_critical_visibility(3, 1)).epsilon(1e-3));
    // never above the closed form beyond tolerance
    CHECK(est.v_crit <= dicke_critical_visibility(3, 1) + 1e-4);
}

TEST_CASE("one zero qubit plus ghz3") {
    const auto est = optimize_settings(partially_product_state(1, ghz_state(3)), Scenario(4, 2),
                                       quick_config(8, 11));
    CHECK(est.v_crit == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
    CHECK(est.v_crit <= product_ghz3_critical_visibility(4) + 1e-4);
}

TEST_CASE("optimization is deterministic for a fixed seed") {
    const auto a = optimize_settings(ghz_state(2), Scenario(2, 2), quick_config(4, 99));
    const auto b = optimize_settings(ghz_state(2), Scenario(2, 2), quick_config(4, 99));
    CHECK(a.v_crit == b.v_crit);
    CHECK(a.best_restart == b.best_restart);
    // and thread partitioning does not change the answer
    OptimizationConfig single = quick_config(4, 99);
    single.threads = 1;
    const auto c = optimize_settings(ghz_state(2), Scenario(2, 2), single);
    CHECK(a.v_crit == c.v_crit);
}

TEST_CASE("estimate certificate matches a direct lp solve") {
    const auto est = optimize_settings(ghz_state(2), Scenario(2, 2), quick_config(4, 13));
    LocalPolytope poly(Scenario(2, 2));
    const VisibilityResult direct =
        poly.max_local_visibility(joint_probabilities(NoisyState(ghz_state(2), 1.0), est.best_settings));
    CHECK(est.v_crit == doctest::Approx(direct.v_star).epsilon(1e-9));
    CHECK_FALSE(est.certificate.degenerate);
}

TEST_CASE("optimize_settings validation") {
    CHECK_THROWS_AS(optimize_settings(ghz_state(3), Scenario(2, 2), quick_config(4, 1)),
                    std::invalid_argument);
    OptimizationConfig cfg = quick_config(4, 1);
    cfg.hints = {"no-such-family"};
    CHECK_THROWS_AS(optimize_settings(ghz_state(2), Scenario(2, 2), cfg), std::invalid_argument);
    cfg = quick_config(0, 1);
    CHECK_THROWS_AS(optimize_settings(ghz_state(2), Scenario(2, 2), cfg), std::invalid_argument);
    CHECK_THROWS_AS(optimize_settings(ghz_state(2), Scenario(2, 2), cfg), std::invalid_argument);
}

TEST_CASE("see-saw finds the two-qubit optimum") {
    OptimizationConfig cfg = quick_config(4, 17);
    cfg.max_iterations = 250;
    const auto [state, est] = optimize_state_and_settings(2, Scenario(2, 2), cfg);
    CHECK(est.v_crit == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(2e-3));
    // the optimal two-qubit state is maximally entangled
    CHECK(concurrence(state) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("see-saw respects the qubit cap") {
    OptimizationConfig cfg = quick_config(2, 1);
    cfg.max_seesaw_qubits = 3;
    CHECK_THROWS_AS(optimize_state_and_settings(4, Scenario(4, 2), cfg), std::invalid_argument);
}

TEST_CASE("entangling projections on ghz3") {
    const auto proj = max_entangling_projections(ghz_state(3), {0, 1}, quick_config(5, 23));
    CHECK_FALSE(proj.failed);
    CHECK(proj.concurrence == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(proj.success_probability == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(proj.directions.size() == 1);
}

TEST_CASE("entangling projections on w3 single out the zero projection") {
    const auto proj = max_entangling_projections(dicke_state(3, 1), {0, 1}, quick_config(5, 29));
    CHECK_FALSE(proj.failed);
    CHECK(proj.concurrence == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(proj.success_probability == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    // post-selected state is the symmetric Bell pair: support on |01>, |10>
    CHECK(std::norm(proj.pair_state(1)) + std::norm(proj.pair_state(2)) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // the found direction is |0> up to phase
    CHECK(std::abs(proj.directions[0].z() - 1.0) < 1e-4);
}

TEST_CASE("entangling projections on a product-times-pair state") {
    const PureState s = partially_product_state(1, ghz_state(2));
    const auto proj = max_entangling_projections(s, {1, 2}, quick_config(5, 31));
    CHECK_FALSE(proj.failed);
    CHECK(proj.concurrence == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("two-qubit helpers") {
    CHECK(concurrence(ghz_state(2)) == doctest::Approx(1.0));
    StateVector amps = StateVector::Zero(4);
    amps(0) = 1.0;
    CHECK(concurrence(PureState(2, amps)) == doctest::Approx(0.0));

    const auto s = optimal_chsh_settings(ghz_state(2));
    CHECK(s.predicted_value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    // partially entangled pure state: 2 sqrt(1 + C^2)
    StateVector partial = StateVector::Zero(4);
    partial(0) = std::cos(0.3);
    partial(3) = std::sin(0.3);
    const PureState pair(2, partial);
    CHECK(optimal_chsh_settings(pair).predicted_value ==
          doctest::Approx(2.0 * std::sqrt(1.0 + concurrence(pair) * concurrence(pair)))
              .epsilon(1e-9));
}

TEST_CASE("ghz3 violates the symmetrized ch expression constructively") {
    const auto report = check_pure_entangled_violation(ghz_state(3), quick_config(5, 37));
    CHECK(report.violated);
    // projection leaves a maximally entangled pair with weight 1/2; the CH
    // maximum for it is (sqrt2 - 1)/2, so the surviving term reaches their product
    CHECK(report.value == doctest::Approx(0.25 * (std::sqrt(2.0) - 1.0)).epsilon(1e-5));
}

TEST_CASE("product states never violate") {
    StateVector amps = StateVector::Zero(8);
    amps(0) = 1.0;
    const auto report = check_pure_entangled_violation(PureState(3, amps), quick_config(5, 41));
    CHECK_FALSE(report.violated);
    CHECK(report.value <= 1e-9);

    // random product states with nontrivial single-qubit marginals
    SeededRng rng(43);
    for (int t = 0; t < 3; ++t) {
        StateVector v(8);
        const PureState a = random_pure_state(1, 1000 + std::uint64_t(t));
        const PureState b = random_pure_state(1, 2000 + std::uint64_t(t));
        const PureState c = random_pure_state(1, 3000 + std::uint64_t(t));
        for (int i = 0; i < 8; ++i)
            v(i) = a.amplitude((i >> 2) & 1) * b.amplitude((i >> 1) & 1) * c.amplitude(i & 1);
        const auto r = check_pure_entangled_violation(PureState(3, v), quick_config(4, 47));
        CHECK_FALSE(r.violated);
        CHECK(r.value <= 1e-9);
    }
}

TEST_CASE("violation value matches the analytic projection bound") {
    // value = success_probability * (2 sqrt(1 + C^2) - 2) / 4 for the winning pair
    const PureState psi = random_pure_state(3, 51);
    const auto report = check_pure_entangled_violation(psi, quick_config(5, 53));
    CHECK(report.violated);
    const double analytic = report.success_probability *
                            (2.0 * std::sqrt(1.0 + report.pair_concurrence * report.pair_concurrence) - 2.0) /
                            4.0;
    CHECK(report.value == doctest::Approx(analytic).epsilon(1e-6));
}

TEST_CASE("random three-qubit states all violate") {
    for (int t = 0; t < 10; ++t) {
        const PureState psi = random_pure_state(3, 6000 + std::uint64_t(t));
        const auto report = check_pure_entangled_violation(psi, quick_config(4, 59));
        CHECK(report.violated);
        CHECK(report.value > 1e-6);
    }
}

TEST_CASE("settings pack and unpack round trip") {
    const Scenario sc(3, 2);
    SeededRng rng(61);
    Eigen::VectorXd angles(12);
    for (int i = 0; i < 12; ++i) angles(i) = rng.uniform(-1.0, 1.0);
    CHECK(pack_settings(sc, unpack_settings(sc, angles)) == angles);
    CHECK_THROWS_AS(unpack_settings(sc, Eigen::VectorXd::Zero(5)), std::invalid_argument);
}
