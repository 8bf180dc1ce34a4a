#include "bellvis/states.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "bellvis/util.hpp"

namespace bellvis {

PureState::PureState(int n_qubits, StateVector amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits_ < 1) throw std::invalid_argument("PureState: need at least one qubit");
    if (amps_.size() != (Eigen::Index(1) << n_qubits_))
        throw std::invalid_argument("PureState: amplitude vector length must be 2^n_qubits");
    const double nrm = amps_.norm();
    if (std::abs(nrm - 1.0) > 1e-9)
        throw std::invalid_argument("PureState: amplitudes are not normalized");
    // squash residual rounding so the unit-norm invariant holds to 1e-12
    if (nrm != 1.0) amps_ /= nrm;
}

NoisyState::NoisyState(PureState pure_state, double v)
    : pure(std::move(pure_state)), visibility(v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("NoisyState: visibility must lie in [0, 1]");
}

PureState ghz_state(int n) {
    if (n < 2) throw std::invalid_argument("ghz_state: n must be >= 2");
    StateVector amps = StateVector::Zero(Eigen::Index(1) << n);
    const double a = 1.0 / std::sqrt(2.0);
    amps(0) = a;
    amps(amps.size() - 1) = a;
    return PureState(n, std::move(amps));
}

PureState dicke_state(int n, int e) {
    if (n < 2) throw std::invalid_argument("dicke_state: n must be >= 2");
    if (e < 1 || e > n - 1)
        throw std::invalid_argument("dicke_state: excitations must satisfy 1 <= e <= n-1");
    StateVector amps = StateVector::Zero(Eigen::Index(1) << n);
    const double a = 1.0 / std::sqrt(binomial(n, e));
    for (Eigen::Index idx = 0; idx < amps.size(); ++idx) {
        if (std::popcount(std::uint64_t(idx)) == e) amps(idx) = a;
    }
    return PureState(n, std::move(amps));
}

PureState partially_product_state(int leading_zeros, const PureState& core) {
    if (leading_zeros < 0)
        throw std::invalid_argument("partially_product_state: leading_zeros must be >= 0");
    if (leading_zeros == 0) return core;
    const int n = leading_zeros + core.n_qubits();
    // |0...0> (x) core: core amplitudes land in the low-index block
    StateVector amps = StateVector::Zero(Eigen::Index(1) << n);
    amps.head(core.dim()) = core.amplitudes();
    return PureState(n, std::move(amps));
}

PureState random_pure_state(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_pure_state: n must be >= 1");
    SeededRng rng(seed);
    StateVector amps(Eigen::Index(1) << n);
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        amps(i) = Complex(re, im);
    }
    amps /= amps.norm();
    return PureState(n, std::move(amps));
}

Eigen::Matrix2cd SiteObservable::matrix() const {
    Eigen::Matrix2cd m;
    if (is_identity) {
        m.setIdentity();
    } else {
        const Complex i(0.0, 1.0);
        m << axis.z(), axis.x() - i * axis.y(),
             axis.x() + i * axis.y(), -axis.z();
    }
    return m;
}

StateVector apply_single_qubit(const StateVector& psi, int n_qubits, int qubit,
                               const Eigen::Matrix2cd& m) {
    StateVector out(psi.size());
    const Eigen::Index stride = Eigen::Index(1) << (n_qubits - 1 - qubit);
    for (Eigen::Index base = 0; base < psi.size(); base += 2 * stride) {
        for (Eigen::Index off = 0; off < stride; ++off) {
            const Complex a0 = psi(base + off);
            const Complex a1 = psi(base + off + stride);
            out(base + off) = m(0, 0) * a0 + m(0, 1) * a1;
            out(base + off + stride) = m(1, 0) * a0 + m(1, 1) * a1;
        }
    }
    return out;
}

double expectation(const NoisyState& state, const std::vector<SiteObservable>& sites) {
    const PureState& psi = state.pure;
    if (int(sites.size()) != psi.n_qubits())
        throw std::invalid_argument("expectation: one site observable per qubit required");

    StateVector phi = psi.amplitudes();
    bool all_identity = true;
    for (int q = 0; q < psi.n_qubits(); ++q) {
        if (sites[q].is_identity) continue;
        all_identity = false;
        phi = apply_single_qubit(phi, psi.n_qubits(), q, sites[q].matrix());
    }
    const double pure_part = psi.amplitudes().dot(phi).real();
    // tr(O)/2^n is 1 when O = I and 0 as soon as any site is traceless
    const double noise_part = all_identity ? 1.0 : 0.0;
    return state.visibility * pure_part + (1.0 - state.visibility) * noise_part;
}

} // namespace bellvis
