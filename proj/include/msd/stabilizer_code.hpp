#pragma once

#include <map>
#include <utility>
#include <vector>

#include "msd/pauli.hpp"
#include "msd/states.hpp"

namespace msd {

struct StabilizerCode {
  int n_physical;
  std::vector<PauliString> generators;
  PauliString logical_x;
  PauliString logical_z;

  void validate() const;  // commutation, independence, logical algebra
};

struct CodeProjector {
  Mat matrix;
  int rank;
};

// The [[5,1,3]] code: generators XZZXI, IXZZX, XIXZZ, ZXIXZ,
// logical X = XXXXX, logical Z = ZZZZZ.
StabilizerCode five_qubit_code();

// P = prod_i (I + g_i)/2.
CodeProjector code_projector(const StabilizerCode& code);

// |0_L> = P|0...0> normalized, |1_L> = logical_x |0_L>.
std::pair<QubitRegisterState, QubitRegisterState> logical_basis(
    const StabilizerCode& code);

QubitRegisterState encode(const StabilizerCode& code,
                          const QubitRegisterState& psi);

// Probability of each generator-measurement outcome pattern; bit i of the key
// is 1 when generator i reads -1. Trivial syndrome is key 0.
std::map<uint32_t, double> syndrome_distribution(const DensityOperator& rho,
                                                 const StabilizerCode& code);

}  // namespace msd
