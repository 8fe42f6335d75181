#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "msd/types.hpp"

namespace msd {

// Pure state on n qubits, computational-basis amplitudes.
// Bit convention everywhere: qubit 0 is the MOST significant bit of the
// basis index, i.e. |q0 q1 ... q_{n-1}>.
class QubitRegisterState {
 public:
  QubitRegisterState(int n_qubits, Vec amplitudes);

  static QubitRegisterState basis_state(int n_qubits, uint32_t index);

  int n_qubits() const { return n_qubits_; }
  int dim() const { return static_cast<int>(amps_.size()); }
  const Vec& amplitudes() const { return amps_; }
  cxd amplitude(uint32_t index) const { return amps_(index); }

 private:
  int n_qubits_;
  Vec amps_;
};

// Density operator on n qubits. Construction checks Hermiticity, unit trace
// and positivity up to the numerical floor.
class DensityOperator {
 public:
  DensityOperator(int n_qubits, Mat matrix);

  static DensityOperator pure(const QubitRegisterState& psi);
  static DensityOperator maximally_mixed(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  const Mat& matrix() const { return mat_; }

 private:
  int n_qubits_;
  Mat mat_;
};

// Strictly increasing list of qubit positions addressing a subsystem.
struct SubsystemIndex {
  std::vector<int> qubits;

  SubsystemIndex(std::initializer_list<int> qs);
  explicit SubsystemIndex(std::vector<int> qs);

  int size() const { return static_cast<int>(qubits.size()); }
  void validate_within(int n_qubits) const;
};

QubitRegisterState tensor_product(const QubitRegisterState& a,
                                  const QubitRegisterState& b);
DensityOperator tensor_product(const DensityOperator& a,
                               const DensityOperator& b);
DensityOperator tensor_power(const DensityOperator& rho, int copies);

// Reduced operator on the kept qubits (renumbered in ascending order).
DensityOperator partial_trace(const DensityOperator& rho,
                              const SubsystemIndex& keep);

// F(rho, psi) = <psi|rho|psi>.
double fidelity_with_pure(const DensityOperator& rho,
                          const QubitRegisterState& psi);

// -sum lambda ln lambda, eigenvalues below kEntropyClip contribute zero.
double von_neumann_entropy(const DensityOperator& rho);

double trace_distance(const DensityOperator& a, const DensityOperator& b);

}  // namespace msd
