#pragma once

#include <vector>

#include "msd/states.hpp"
#include "msd/types.hpp"

namespace msd {

// theta_T = arccos(1/sqrt(3))/2; |T0> = cos(theta_T)|0> + e^{i pi/4} sin(theta_T)|1>.
double t_state_angle();
QubitRegisterState t_zero();
// Orthogonal partner with Bloch vector -(1,1,1)/sqrt(3).
QubitRegisterState t_one();

// The 24 single-qubit Cliffords (closure of <H,S> modulo global phase),
// phase-canonicalized 2x2 unitaries.
const std::vector<Eigen::Matrix2cd>& single_qubit_clifford_group();

Eigen::Vector3d bloch_vector(const Mat& rho_2x2);
Mat from_bloch_vector(const Eigen::Vector3d& r);

}  // namespace msd
