#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace bellvis {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;

// Pure state of n qubits as a complex amplitude vector of length 2^n.
//
// Basis-index convention used everywhere in this library: qubit 0 is the
// most significant bit of the basis index, qubit n-1 the least significant.
class PureState {
public:
    PureState(int n_qubits, StateVector amplitudes);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return amps_.size(); }
    const StateVector& amplitudes() const { return amps_; }
    Complex amplitude(Eigen::Index basis_index) const { return amps_(basis_index); }

    // Bit of `basis_index` holding the given qubit's computational value.
    int qubit_bit(Eigen::Index basis_index, int qubit) const {
        return int((basis_index >> (n_qubits_ - 1 - qubit)) & 1);
    }

private:
    int n_qubits_;
    StateVector amps_;
};

// rho(v) = v |psi><psi| + (1 - v) I / 2^n, kept in this implicit form;
// the dense 2^n x 2^n matrix is never materialized.
struct NoisyState {
    NoisyState(PureState pure_state, double v);
    PureState pure;
    double visibility;
};

// (|0...0> + |1...1>) / sqrt(2)
PureState ghz_state(int n);

// Symmetric superposition of all n-qubit basis states with exactly e ones,
// each with amplitude 1/sqrt(C(n,e)). e = 1 gives the W state.
PureState dicke_state(int n, int e);

// |0>^{leading_zeros} (x) core, the zeros as the leading (most significant) qubits.
PureState partially_product_state(int leading_zeros, const PureState& core);

// Haar-random pure state: i.i.d. standard complex Gaussian entries, normalized.
// Deterministic for a fixed seed.
PureState random_pure_state(int n, std::uint64_t seed);

// One site of a tensor-product observable: either the identity or n.sigma for
// a unit Bloch vector n = (sin t cos p, sin t sin p, cos t).
struct SiteObservable {
    static SiteObservable identity() { return {true, Eigen::Vector3d::Zero()}; }
    static SiteObservable bloch(const Eigen::Vector3d& axis) { return {false, axis.normalized()}; }
    static SiteObservable bloch(double theta, double phi) {
        return bloch(Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                     std::sin(theta) * std::sin(phi), std::cos(theta)));
    }

    bool is_identity;
    Eigen::Vector3d axis;

    Eigen::Matrix2cd matrix() const;
};

// tr(rho(v) O) for O = (x)_k sites[k]. Equals v <psi|O|psi> + (1-v) tr(O)/2^n;
// the noise term is 0 unless every site is the identity.
double expectation(const NoisyState& state, const std::vector<SiteObservable>& sites);

// |psi'> = (I (x) ... (x) m (x) ... (x) I) |psi>, m acting on `qubit`.
StateVector apply_single_qubit(const StateVector& psi, int n_qubits, int qubit,
                               const Eigen::Matrix2cd& m);

} // namespace bellvis
