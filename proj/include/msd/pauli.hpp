#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "msd/states.hpp"
#include "msd/types.hpp"

namespace msd {

// n-qubit Pauli operator i^k * X^x Z^z with the Hermitian letter convention
// (x,z)=(1,1) -> Y. Bit i of x_bits/z_bits addresses qubit i.
class PauliString {
 public:
  PauliString(int n_qubits, uint32_t x_bits, uint32_t z_bits,
              int phase_exponent = 0);

  static PauliString identity(int n_qubits);
  // Label letters act on qubit 0 first: "XZZXI" puts X on qubit 0.
  static PauliString from_label(std::string_view label);
  // Inverse of lex_index(): base-4 digits I<X<Y<Z, qubit 0 most significant.
  static PauliString from_lex_index(int n_qubits, uint64_t index);

  int n_qubits() const { return n_qubits_; }
  uint32_t x_bits() const { return x_bits_; }
  uint32_t z_bits() const { return z_bits_; }
  int phase_exponent() const { return phase_exp_; }
  cxd phase() const;

  bool is_identity_letters() const { return x_bits_ == 0 && z_bits_ == 0; }
  bool is_hermitian() const { return phase_exp_ % 2 == 0; }
  int weight() const;

  bool commutes_with(const PauliString& other) const;
  PauliString operator*(const PauliString& other) const;
  PauliString negated() const;
  bool equal_letters(const PauliString& other) const {
    return x_bits_ == other.x_bits_ && z_bits_ == other.z_bits_;
  }

  uint64_t lex_index() const;  // phase ignored
  std::string label() const;   // letters only; sign via phase()
  Mat to_matrix() const;

 private:
  int n_qubits_;
  uint32_t x_bits_, z_bits_;
  int phase_exp_;  // i^k, k in {0,1,2,3}
};

// Tr(rho P) without materializing P; O(2^n).
cxd pauli_trace(const Mat& rho, const PauliString& p);

// c_P = Tr(rho P) over all 4^n unsigned Paulis in lex order; c_I = 1 and
// rho = 2^{-n} sum_P c_P P.
Eigen::VectorXd pauli_expectation_vector(const DensityOperator& rho);

// Reconstruction from an expectation vector (round-trip partner of the above).
DensityOperator operator_from_pauli_vector(int n_qubits,
                                           const Eigen::VectorXd& c);

}  // namespace msd
