#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>

#include "bellvis/states.hpp"
#include "bellvis/util.hpp"

using namespace bellvis;

namespace {

// Dense oracle: build the full operator by Kronecker products and evaluate
// tr(rho(v) O) against a materialized density matrix. Independent of the
// implicit-mixture fast path it checks.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXcd operator_matrix(const std::vector<SiteObservable>& sites) {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
    for (const auto& site : sites) op = kron(op, site.matrix());
    return op;
}

double dense_expectation(const NoisyState& state, const std::vector<SiteObservable>& sites) {
    const Eigen::Index d = state.pure.dim();
    const Eigen::MatrixXcd rho =
        state.visibility * (state.pure.amplitudes() * state.pure.amplitudes().adjoint()) +
        (1.0 - state.visibility) / double(d) * Eigen::MatrixXcd::Identity(d, d);
    return (rho * operator_matrix(sites)).trace().real();
}

SiteObservable axis_x() { return SiteObservable::bloch(M_PI / 2.0, 0.0); }
SiteObservable axis_z() { return SiteObservable::bloch(0.0, 0.0); }

} // namespace

TEST_CASE("ghz state amplitudes") {
    const PureState g2 = ghz_state(2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(g2.amplitude(0).real() == doctest::Approx(r).epsilon(1e-14));
    CHECK(g2.amplitude(1) == Complex(0, 0));
    CHECK(g2.amplitude(2) == Complex(0, 0));
    CHECK(g2.amplitude(3).real() == doctest::Approx(r).epsilon(1e-14));
    CHECK(std::abs(g2.amplitudes().norm() - 1.0) < 1e-12);

    const PureState g3 = ghz_state(3);
    for (Eigen::Index i = 0; i < 8; ++i) {
        if (i == 0 || i == 7)
            CHECK(std::abs(g3.amplitude(i)) > 0.7);
        else
            CHECK(g3.amplitude(i) == Complex(0, 0));
    }
    CHECK_THROWS_AS(ghz_state(1), std::invalid_argument);
}

TEST_CASE("dicke state amplitudes") {
    const PureState w3 = dicke_state(3, 1);
    const double r = 1.0 / std::sqrt(3.0);
    for (Eigen::Index i : {1, 2, 4}) CHECK(w3.amplitude(i).real() == doctest::Approx(r));
    for (Eigen::Index i : {0, 3, 5, 6, 7}) CHECK(w3.amplitude(i) == Complex(0, 0));

    const PureState d42 = dicke_state(4, 2);
    int nonzero = 0;
    for (Eigen::Index i = 0; i < d42.dim(); ++i) {
        if (std::abs(d42.amplitude(i)) > 0) {
            ++nonzero;
            CHECK(std::popcount(std::uint64_t(i)) == 2);
            CHECK(d42.amplitude(i).real() == doctest::Approx(1.0 / std::sqrt(6.0)));
        }
    }
    CHECK(nonzero == 6);

    CHECK_THROWS_AS(dicke_state(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(dicke_state(3, 0), std::invalid_argument);
}

TEST_CASE("partially product state") {
    const PureState s = partially_product_state(1, ghz_state(3));
    CHECK(s.n_qubits() == 4);
    for (Eigen::Index i = 0; i < 16; ++i) {
        if (i == 0 || i == 7)
            CHECK(std::abs(s.amplitude(i)) == doctest::Approx(1.0 / std::sqrt(2.0)));
        else
            CHECK(s.amplitude(i) == Complex(0, 0));
    }

    const PureState same = partially_product_state(0, ghz_state(2));
    CHECK(same.amplitudes() == ghz_state(2).amplitudes());

    const PureState bold6 = partially_product_state(3, ghz_state(3));
    CHECK(bold6.n_qubits() == 6);
    CHECK(std::abs(bold6.amplitude(0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(bold6.amplitude(7)) == doctest::Approx(1.0 / std::sqrt(2.0)));

    CHECK_THROWS_AS(partially_product_state(-1, ghz_state(2)), std::invalid_argument);
}

TEST_CASE("random pure states are seeded and Haar-like") {
    const PureState a = random_pure_state(3, 42);
    const PureState b = random_pure_state(3, 42);
    CHECK(a.amplitudes() == b.amplitudes());
    const PureState c = random_pure_state(3, 43);
    CHECK(a.amplitudes() != c.amplitudes());
    CHECK(std::abs(a.amplitudes().norm() - 1.0) < 1e-12);

    // Monte-Carlo Haar check: mean |amplitude_0|^2 for one qubit is 1/2
    double mean = 0.0;
    const int samples = 10000;
    for (int s = 0; s < samples; ++s)
        mean += std::norm(random_pure_state(1, std::uint64_t(s)).amplitude(0));
    mean /= samples;
    CHECK(std::abs(mean - 0.5) < 0.02);
}

TEST_CASE("expectation values") {
    const NoisyState g2(ghz_state(2), 1.0);
    CHECK(expectation(g2, {axis_z(), axis_z()}) == doctest::Approx(1.0).epsilon(1e-12));

    const NoisyState noise(ghz_state(2), 0.0);
    CHECK(expectation(noise, {axis_z(), axis_z()}) == doctest::Approx(0.0));
    CHECK(expectation(noise, {SiteObservable::identity(), SiteObservable::identity()}) ==
          doctest::Approx(1.0));

    const NoisyState w3(dicke_state(3, 1), 1.0);
    CHECK(expectation(w3, {axis_z(), axis_z(), axis_z()}) == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK_THROWS_AS(expectation(g2, {axis_z()}), std::invalid_argument);
}

TEST_CASE("expectation matches the dense-matrix oracle") {
    SeededRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 2;
        const PureState psi = random_pure_state(n, 100 + std::uint64_t(trial));
        const double v = rng.uniform();
        std::vector<SiteObservable> sites;
        for (int q = 0; q < n; ++q) {
            if (rng.uniform() < 0.25)
                sites.push_back(SiteObservable::identity());
            else
                sites.push_back(SiteObservable::bloch(std::acos(rng.uniform(-1.0, 1.0)),
                                                      rng.uniform(0.0, 2.0 * M_PI)));
        }
        const NoisyState state(psi, v);
        CHECK(expectation(state, sites) == doctest::Approx(dense_expectation(state, sites)).epsilon(1e-10));
    }
}

TEST_CASE("dicke permutation symmetry") {
    const NoisyState d(dicke_state(4, 2), 0.8);
    SeededRng rng(11);
    std::vector<SiteObservable> sites;
    for (int q = 0; q < 4; ++q)
        sites.push_back(SiteObservable::bloch(std::acos(rng.uniform(-1.0, 1.0)),
                                              rng.uniform(0.0, 2.0 * M_PI)));
    const double reference = expectation(d, sites);
    std::vector<SiteObservable> permuted = {sites[2], sites[0], sites[3], sites[1]};
    CHECK(expectation(d, permuted) == doctest::Approx(reference).epsilon(1e-10));
}

TEST_CASE("mixture linearity is exact") {
    const PureState psi = random_pure_state(3, 5);
    std::vector<SiteObservable> sites = {axis_x(), axis_z(), axis_x()};
    const double at1 = expectation(NoisyState(psi, 1.0), sites);
    const double at0 = expectation(NoisyState(psi, 0.0), sites);
    for (double v : {0.25, 0.5, 0.9}) {
        CHECK(expectation(NoisyState(psi, v), sites) == v * at1 + (1.0 - v) * at0);
    }
}

TEST_CASE("pure state validation") {
    StateVector bad(4);
    bad << 1.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(PureState(2, bad), std::invalid_argument);
    StateVector wrong_len(3);
    wrong_len << 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(PureState(2, wrong_len), std::invalid_argument);
    CHECK_THROWS_AS(NoisyState(ghz_state(2), 1.5), std::invalid_argument);
    CHECK_THROWS_AS(NoisyState(ghz_state(2), -0.1), std::invalid_argument);
}
