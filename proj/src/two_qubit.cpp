#include "bellvis/two_qubit.hpp"

#include <cmath>
#include <stdexcept>

namespace bellvis {

double concurrence(const PureState& pair) {
    if (pair.n_qubits() != 2) throw std::invalid_argument("concurrence: need a two-qubit state");
    const StateVector& a = pair.amplitudes();
    return 2.0 * std::abs(a(0) * a(3) - a(1) * a(2));
}

Eigen::Matrix3d correlation_matrix(const PureState& pair) {
    if (pair.n_qubits() != 2)
        throw std::invalid_argument("correlation_matrix: need a two-qubit state");
    const Eigen::Vector3d axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    Eigen::Matrix3d t;
    NoisyState pure(pair, 1.0);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            t(a, b) = expectation(pure, {SiteObservable::bloch(axes[a]), SiteObservable::bloch(axes[b])});
    return t;
}

ChshSettings optimal_chsh_settings(const PureState& pair) {
    const Eigen::Matrix3d t = correlation_matrix(pair);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t);
    // eigenvalues ascending; take the top two
    const double l1 = es.eigenvalues()(2);
    const double l2 = std::max(es.eigenvalues()(1), 0.0);
    const Eigen::Vector3d c1 = es.eigenvectors().col(2);
    const Eigen::Vector3d c2 = es.eigenvectors().col(1);

    ChshSettings s;
    const Eigen::Vector3d tc1 = t * c1;
    const Eigen::Vector3d tc2 = t * c2;
    s.a0 = tc1.norm() > 1e-12 ? Eigen::Vector3d(tc1.normalized()) : Eigen::Vector3d(0, 0, 1);
    if (tc2.norm() > 1e-12) {
        s.a1 = tc2.normalized();
    } else {
        // degenerate (product) case: any direction orthogonal to a0
        s.a1 = s.a0.unitOrthogonal();
    }
    const double theta = std::atan2(std::sqrt(l2), std::sqrt(l1));
    s.b0 = std::cos(theta) * c1 + std::sin(theta) * c2;
    s.b1 = std::cos(theta) * c1 - std::sin(theta) * c2;
    s.predicted_value = 2.0 * std::sqrt(l1 + l2);
    return s;
}

} // namespace bellvis
