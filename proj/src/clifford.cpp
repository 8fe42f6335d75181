#include "msd/clifford.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace msd {

double t_state_angle() { return 0.5 * std::acos(1.0 / std::sqrt(3.0)); }

QubitRegisterState t_zero() {
  const double th = t_state_angle();
  Vec v(2);
  v << std::cos(th), std::polar(std::sin(th), M_PI / 4);
  return QubitRegisterState(1, std::move(v));
}

QubitRegisterState t_one() {
  const double th = t_state_angle();
  Vec v(2);
  v << std::sin(th), -std::polar(std::cos(th), M_PI / 4);
  return QubitRegisterState(1, std::move(v));
}

namespace {

// Canonical key modulo global phase: rotate so the largest-magnitude entry is
// real positive, then quantize.
std::array<int64_t, 8> phase_canonical_key(const Eigen::Matrix2cd& u) {
  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (std::abs(u(i, j)) > best + 1e-9) {
        best = std::abs(u(i, j));
        bi = i;
        bj = j;
      }
    }
  }
  const cxd rot = std::conj(u(bi, bj)) / std::abs(u(bi, bj));
  std::array<int64_t, 8> key{};
  int k = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const cxd v = u(i, j) * rot;
      key[k++] = std::llround(v.real() * 1e6);
      key[k++] = std::llround(v.imag() * 1e6);
    }
  }
  return key;
}

std::vector<Eigen::Matrix2cd> build_clifford_group() {
  Eigen::Matrix2cd h, s;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  s << 1, 0, 0, cxd(0, 1);

  std::map<std::array<int64_t, 8>, Eigen::Matrix2cd> seen;
  std::vector<Eigen::Matrix2cd> frontier{Eigen::Matrix2cd::Identity()};
  seen.emplace(phase_canonical_key(frontier[0]), frontier[0]);
  while (!frontier.empty()) {
    std::vector<Eigen::Matrix2cd> next;
    for (const auto& u : frontier) {
      for (const auto& g : {h, s}) {
        Eigen::Matrix2cd v = g * u;
        auto key = phase_canonical_key(v);
        if (seen.emplace(key, v).second) next.push_back(v);
      }
    }
    frontier.swap(next);
  }
  if (seen.size() != 24) {
    throw std::logic_error("Clifford closure produced " +
                           std::to_string(seen.size()) + " elements");
  }
  std::vector<Eigen::Matrix2cd> out;
  out.reserve(24);
  for (auto& [key, u] : seen) out.push_back(u);
  return out;
}

}  // namespace

const std::vector<Eigen::Matrix2cd>& single_qubit_clifford_group() {
  static const std::vector<Eigen::Matrix2cd> group = build_clifford_group();
  return group;
}

Eigen::Vector3d bloch_vector(const Mat& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw std::invalid_argument("bloch_vector expects a 2x2 matrix");
  }
  Eigen::Vector3d r;
  r(0) = 2.0 * std::real(rho(0, 1));
  r(1) = 2.0 * std::imag(rho(1, 0));
  r(2) = std::real(rho(0, 0) - rho(1, 1));
  return r;
}

Mat from_bloch_vector(const Eigen::Vector3d& r) {
  Mat m(2, 2);
  m(0, 0) = 0.5 * (1.0 + r(2));
  m(1, 1) = 0.5 * (1.0 - r(2));
  m(0, 1) = 0.5 * cxd(r(0), -r(1));
  m(1, 0) = 0.5 * cxd(r(0), r(1));
  return m;
}

}  // namespace msd
