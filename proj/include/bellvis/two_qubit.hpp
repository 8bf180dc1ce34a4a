#pragma once

#include <Eigen/Dense>

#include "bellvis/states.hpp"

namespace bellvis {

// Concurrence of a two-qubit pure state: 2 |a00 a11 - a01 a10|.
// Nonzero exactly for entangled pairs.
double concurrence(const PureState& pair);

// T_ab = <psi| sigma_a (x) sigma_b |psi>, a,b in {x,y,z}.
Eigen::Matrix3d correlation_matrix(const PureState& pair);

// CHSH-optimal measurement directions for a two-qubit state, from the top two
// eigenpairs of T^T T: the value <A0B0> + <A0B1> + <A1B0> - <A1B1> attains
// 2 sqrt(lambda1 + lambda2), which for pure states equals 2 sqrt(1 + C^2).
struct ChshSettings {
    Eigen::Vector3d a0, a1;  // first qubit
    Eigen::Vector3d b0, b1;  // second qubit
    double predicted_value = 0.0;
};
ChshSettings optimal_chsh_settings(const PureState& pair);

} // namespace bellvis
