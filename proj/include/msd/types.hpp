#pragma once

#include <complex>
#include <Eigen/Dense>

namespace msd {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Register size cap. 5 covers every protocol input; bump via -DMSD_MAX_QUBITS=6
// for headroom.
#ifndef MSD_MAX_QUBITS
#define MSD_MAX_QUBITS 5
#endif
inline constexpr int kMaxQubits = MSD_MAX_QUBITS;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-9;
inline constexpr double kEntropyClip = 1e-12;

inline int dim_of(int n_qubits) { return 1 << n_qubits; }

}  // namespace msd
