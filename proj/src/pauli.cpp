#include "msd/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace msd {

namespace {

constexpr cxd kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int popcount32(uint32_t v) { return std::popcount(v); }

}  // namespace

PauliString::PauliString(int n_qubits, uint32_t x_bits, uint32_t z_bits,
                         int phase_exponent)
    : n_qubits_(n_qubits),
      x_bits_(x_bits),
      z_bits_(z_bits),
      phase_exp_(((phase_exponent % 4) + 4) % 4) {
  if (n_qubits_ < 1 || n_qubits_ > 31) {
    throw std::invalid_argument("PauliString: bad qubit count");
  }
  const uint32_t mask = (n_qubits_ == 31) ? 0x7fffffffu
                                          : ((1u << n_qubits_) - 1u);
  if ((x_bits_ & ~mask) || (z_bits_ & ~mask)) {
    throw std::invalid_argument("PauliString: bits outside register");
  }
}

PauliString PauliString::identity(int n_qubits) {
  return PauliString(n_qubits, 0, 0, 0);
}

PauliString PauliString::from_label(std::string_view label) {
  const int n = static_cast<int>(label.size());
  uint32_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    switch (label[q]) {
      case 'I': break;
      case 'X': x |= 1u << q; break;
      case 'Y': x |= 1u << q; z |= 1u << q; break;
      case 'Z': z |= 1u << q; break;
      default:
        throw std::invalid_argument("PauliString: bad letter in label");
    }
  }
  return PauliString(n, x, z, 0);
}

PauliString PauliString::from_lex_index(int n_qubits, uint64_t index) {
  uint32_t x = 0, z = 0;
  for (int q = n_qubits - 1; q >= 0; --q) {
    const int digit = static_cast<int>(index % 4);
    index /= 4;
    if (digit == 1 || digit == 2) x |= 1u << q;
    if (digit == 2 || digit == 3) z |= 1u << q;
  }
  return PauliString(n_qubits, x, z, 0);
}

cxd PauliString::phase() const { return kPhases[phase_exp_]; }

int PauliString::weight() const { return popcount32(x_bits_ | z_bits_); }

bool PauliString::commutes_with(const PauliString& other) const {
  const int s = popcount32(x_bits_ & other.z_bits_) +
                popcount32(z_bits_ & other.x_bits_);
  return (s & 1) == 0;
}

PauliString PauliString::operator*(const PauliString& other) const {
  if (n_qubits_ != other.n_qubits_) {
    throw std::invalid_argument("PauliString product: size mismatch");
  }
  // i^{w1} X^{x1}Z^{z1} . i^{w2} X^{x2}Z^{z2}
  //   = i^{w1+w2+2|z1&x2|-w12} . i^{w12} X^{x1^x2} Z^{z1^z2}
  const int w1 = popcount32(x_bits_ & z_bits_);
  const int w2 = popcount32(other.x_bits_ & other.z_bits_);
  const uint32_t xr = x_bits_ ^ other.x_bits_;
  const uint32_t zr = z_bits_ ^ other.z_bits_;
  const int w12 = popcount32(xr & zr);
  const int k = phase_exp_ + other.phase_exp_ + w1 + w2 +
                2 * popcount32(z_bits_ & other.x_bits_) - w12;
  return PauliString(n_qubits_, xr, zr, k);
}

PauliString PauliString::negated() const {
  return PauliString(n_qubits_, x_bits_, z_bits_, phase_exp_ + 2);
}

uint64_t PauliString::lex_index() const {
  uint64_t idx = 0;
  for (int q = 0; q < n_qubits_; ++q) {
    const int xb = (x_bits_ >> q) & 1;
    const int zb = (z_bits_ >> q) & 1;
    const int digit = xb ? (zb ? 2 : 1) : (zb ? 3 : 0);
    idx = idx * 4 + digit;
  }
  return idx;
}

std::string PauliString::label() const {
  std::string s(n_qubits_, 'I');
  for (int q = 0; q < n_qubits_; ++q) {
    const int xb = (x_bits_ >> q) & 1;
    const int zb = (z_bits_ >> q) & 1;
    if (xb && zb) s[q] = 'Y';
    else if (xb) s[q] = 'X';
    else if (zb) s[q] = 'Z';
  }
  return s;
}

Mat PauliString::to_matrix() const {
  const int d = dim_of(n_qubits_);
  Mat m = Mat::Zero(d, d);
  // Basis bit of qubit q sits at position n-1-q.
  uint32_t xmask = 0, zmask = 0;
  for (int q = 0; q < n_qubits_; ++q) {
    if ((x_bits_ >> q) & 1) xmask |= 1u << (n_qubits_ - 1 - q);
    if ((z_bits_ >> q) & 1) zmask |= 1u << (n_qubits_ - 1 - q);
  }
  const int w = popcount32(x_bits_ & z_bits_);
  const cxd base = kPhases[(phase_exp_ + w) % 4];
  for (uint32_t col = 0; col < static_cast<uint32_t>(d); ++col) {
    // X^x Z^z |col> = (-1)^{z.col} |col ^ x>
    const cxd val = (popcount32(zmask & col) & 1) ? -base : base;
    m(col ^ xmask, col) = val;
  }
  return m;
}

cxd pauli_trace(const Mat& rho, const PauliString& p) {
  const int n = p.n_qubits();
  const int d = dim_of(n);
  uint32_t xmask = 0, zmask = 0;
  for (int q = 0; q < n; ++q) {
    if ((p.x_bits() >> q) & 1) xmask |= 1u << (n - 1 - q);
    if ((p.z_bits() >> q) & 1) zmask |= 1u << (n - 1 - q);
  }
  const int w = popcount32(p.x_bits() & p.z_bits());
  const cxd base = kPhases[(p.phase_exponent() + w) % 4];
  cxd sum = 0.0;
  for (uint32_t b = 0; b < static_cast<uint32_t>(d); ++b) {
    const cxd val = (popcount32(zmask & b) & 1) ? -base : base;
    sum += val * rho(b, b ^ xmask);
  }
  return sum;
}

Eigen::VectorXd pauli_expectation_vector(const DensityOperator& rho) {
  const int n = rho.n_qubits();
  const uint64_t total = 1ull << (2 * n);
  Eigen::VectorXd c(total);
  for (uint64_t i = 0; i < total; ++i) {
    c(i) = std::real(pauli_trace(rho.matrix(), PauliString::from_lex_index(n, i)));
  }
  return c;
}

DensityOperator operator_from_pauli_vector(int n_qubits,
                                           const Eigen::VectorXd& c) {
  const int d = dim_of(n_qubits);
  const uint64_t total = 1ull << (2 * n_qubits);
  if (c.size() != static_cast<Eigen::Index>(total)) {
    throw std::invalid_argument("pauli vector length != 4^n");
  }
  Mat m = Mat::Zero(d, d);
  for (uint64_t i = 0; i < total; ++i) {
    if (c(i) == 0.0) continue;
    m += c(i) * PauliString::from_lex_index(n_qubits, i).to_matrix();
  }
  m /= static_cast<double>(d);
  return DensityOperator(n_qubits, std::move(m));
}

}  // namespace msd
