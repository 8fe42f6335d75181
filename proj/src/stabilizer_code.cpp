#include "msd/stabilizer_code.hpp"

#include <cmath>
#include <stdexcept>

namespace msd {

namespace {

// GF(2) rank of the (x|z) rows.
int symplectic_rank(const std::vector<PauliString>& ps) {
  std::vector<uint64_t> rows;
  for (const auto& p : ps) {
    rows.push_back((static_cast<uint64_t>(p.z_bits()) << 32) | p.x_bits());
  }
  int rank = 0;
  for (int bit = 63; bit >= 0; --bit) {
    const uint64_t mask = 1ull << bit;
    int pivot = -1;
    for (size_t i = rank; i < rows.size(); ++i) {
      if (rows[i] & mask) {
        pivot = static_cast<int>(i);
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) != rank && (rows[i] & mask)) {
        rows[i] ^= rows[rank];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

void StabilizerCode::validate() const {
  for (size_t i = 0; i < generators.size(); ++i) {
    if (!generators[i].is_hermitian()) {
      throw std::invalid_argument("generator with imaginary phase");
    }
    for (size_t j = i + 1; j < generators.size(); ++j) {
      if (!generators[i].commutes_with(generators[j])) {
        throw std::invalid_argument("generators do not all commute");
      }
    }
  }
  if (symplectic_rank(generators) != static_cast<int>(generators.size())) {
    throw std::invalid_argument("generators are not independent");
  }
  for (const auto& g : generators) {
    if (!logical_x.commutes_with(g) || !logical_z.commutes_with(g)) {
      throw std::invalid_argument("logical operator fails to commute with a "
                                  "generator");
    }
  }
  if (logical_x.commutes_with(logical_z)) {
    throw std::invalid_argument("logical X and Z must anticommute");
  }
}

StabilizerCode five_qubit_code() {
  StabilizerCode code{5,
                      {PauliString::from_label("XZZXI"),
                       PauliString::from_label("IXZZX"),
                       PauliString::from_label("XIXZZ"),
                       PauliString::from_label("ZXIXZ")},
                      PauliString::from_label("XXXXX"),
                      PauliString::from_label("ZZZZZ")};
  code.validate();
  return code;
}

CodeProjector code_projector(const StabilizerCode& code) {
  code.validate();
  const int d = dim_of(code.n_physical);
  Mat p = Mat::Identity(d, d);
  for (const auto& g : code.generators) {
    p = p * (Mat::Identity(d, d) + g.to_matrix()) * 0.5;
  }
  CodeProjector out;
  out.rank = static_cast<int>(std::lround(std::real(p.trace())));
  out.matrix = std::move(p);
  return out;
}

std::pair<QubitRegisterState, QubitRegisterState> logical_basis(
    const StabilizerCode& code) {
  const CodeProjector p = code_projector(code);
  if (p.rank != 2) {
    throw std::invalid_argument("logical_basis expects a rank-2 projector");
  }
  Vec v0 = p.matrix.col(0);  // P|0...0>
  const double norm = v0.norm();
  if (norm < 1e-9) {
    throw std::runtime_error("P|0...0> is numerically null");
  }
  v0 /= norm;
  Vec v1 = code.logical_x.to_matrix() * v0;
  return {QubitRegisterState(code.n_physical, std::move(v0)),
          QubitRegisterState(code.n_physical, std::move(v1))};
}

QubitRegisterState encode(const StabilizerCode& code,
                          const QubitRegisterState& psi) {
  if (psi.n_qubits() != 1) {
    throw std::invalid_argument("encode expects a single-qubit input");
  }
  const auto [l0, l1] = logical_basis(code);
  Vec v = psi.amplitude(0) * l0.amplitudes() + psi.amplitude(1) * l1.amplitudes();
  return QubitRegisterState(code.n_physical, std::move(v));
}

std::map<uint32_t, double> syndrome_distribution(const DensityOperator& rho,
                                                 const StabilizerCode& code) {
  if (rho.n_qubits() != code.n_physical) {
    throw std::invalid_argument("syndrome_distribution: dimension mismatch");
  }
  const int d = rho.dim();
  const int k = static_cast<int>(code.generators.size());
  std::map<uint32_t, double> dist;
  for (uint32_t s = 0; s < (1u << k); ++s) {
    Mat proj = Mat::Identity(d, d);
    for (int i = 0; i < k; ++i) {
      const double sign = ((s >> i) & 1u) ? -1.0 : 1.0;
      proj = proj * (Mat::Identity(d, d) +
                     sign * code.generators[i].to_matrix()) *
             0.5;
    }
    dist[s] = std::real((proj * rho.matrix()).trace());
  }
  return dist;
}

}  // namespace msd
