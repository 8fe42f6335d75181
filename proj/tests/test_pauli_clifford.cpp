#include <doctest.h>

#include <cmath>
#include <set>

#include "msd/clifford.hpp"
#include "msd/pauli.hpp"
#include "oracles.hpp"

using namespace msd;

TEST_CASE("pauli multiplication closes with correct phases") {
  const auto x = PauliString::from_label("X");
  const auto y = PauliString::from_label("Y");
  const auto z = PauliString::from_label("Z");

  const auto xy = x * y;
  CHECK(xy.equal_letters(z));
  CHECK(xy.phase() == cxd(0, 1));  // XY = iZ
  const auto yx = y * x;
  CHECK(yx.phase() == cxd(0, -1));
  CHECK((x * x).equal_letters(PauliString::identity(1)));
  CHECK((x * x).phase() == cxd(1, 0));

  CHECK_FALSE(x.commutes_with(y));
  CHECK(PauliString::from_label("XX").commutes_with(
      PauliString::from_label("ZZ")));
  CHECK_FALSE(PauliString::from_label("XI").commutes_with(
      PauliString::from_label("ZI")));
}

TEST_CASE("pauli matrices match the literal construction") {
  for (const std::string label : {"X", "Y", "Z", "XY", "ZI", "YZ", "XZY"}) {
    const Mat ours = PauliString::from_label(label).to_matrix();
    const Mat ref = oracle::pauli_string(label);
    CHECK((ours - ref).cwiseAbs().maxCoeff() < 1e-14);
  }
  // All 16 two-qubit Paulis in lex order, against digit-decoded labels.
  const char letters[] = {'I', 'X', 'Y', 'Z'};
  for (int idx = 0; idx < 16; ++idx) {
    const std::string label = {letters[idx / 4], letters[idx % 4]};
    const auto p = PauliString::from_lex_index(2, idx);
    CHECK(p.lex_index() == static_cast<uint64_t>(idx));
    CHECK(p.label() == label);
    CHECK((p.to_matrix() - oracle::pauli_string(label)).cwiseAbs().maxCoeff() <
          1e-14);
  }
}

TEST_CASE("pauli products are hermitian or anti-hermitian as expected") {
  // Product of two commuting hermitian strings is hermitian.
  const auto g1 = PauliString::from_label("XZZXI");
  const auto g2 = PauliString::from_label("IXZZX");
  CHECK(g1.commutes_with(g2));
  CHECK((g1 * g2).is_hermitian());
  const Mat m = (g1 * g2).to_matrix();
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((m * m - Mat::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("single qubit clifford group") {
  const auto& group = single_qubit_clifford_group();
  CHECK(group.size() == 24);

  // Octahedron vertices permute among themselves under every element.
  const std::vector<Eigen::Vector3d> axes = {
      {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  auto is_axis = [&axes](const Eigen::Vector3d& r) {
    for (const auto& a : axes) {
      if ((r - a).norm() < 1e-9) return true;
    }
    return false;
  };
  std::set<std::array<int64_t, 9>> rotations;
  for (const auto& u : group) {
    std::array<int64_t, 9> rot{};
    int k = 0;
    for (const auto& a : axes) {
      if (k >= 9) break;
      const Mat rho = 0.5 * (Mat::Identity(2, 2) +
                             a(0) * oracle::pauli_1q('X') +
                             a(1) * oracle::pauli_1q('Y') +
                             a(2) * oracle::pauli_1q('Z'));
      const Eigen::Vector3d image = bloch_vector(u * rho * u.adjoint());
      CHECK(is_axis(image));
      if (k < 9) {
        rot[k++] = std::llround(image(0) * 2 + image(1) * 3 + image(2) * 5);
      }
    }
    rotations.insert(rot);
  }

  // Orbit of |T0| has exactly the eight sign patterns (+-1,+-1,+-1)/sqrt3.
  const Mat rho_t = DensityOperator::pure(t_zero()).matrix();
  std::set<std::array<int, 3>> orbit;
  for (const auto& u : group) {
    const Eigen::Vector3d r = bloch_vector(u * rho_t * u.adjoint());
    std::array<int, 3> signs{};
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(std::abs(r(i)) - 1.0 / std::sqrt(3.0)) < 1e-12);
      signs[i] = r(i) > 0 ? 1 : -1;
    }
    orbit.insert(signs);
  }
  CHECK(orbit.size() == 8);
}

TEST_CASE("t states") {
  CHECK(t_state_angle() ==
        doctest::Approx(0.5 * std::acos(1.0 / std::sqrt(3.0))).epsilon(1e-15));
  const Mat rt0 = DensityOperator::pure(t_zero()).matrix();
  const Mat expect0 =
      0.5 * (Mat::Identity(2, 2) +
             (oracle::pauli_1q('X') + oracle::pauli_1q('Y') +
              oracle::pauli_1q('Z')) /
                 std::sqrt(3.0));
  CHECK((rt0 - expect0).cwiseAbs().maxCoeff() < 1e-14);
  const cxd overlap =
      t_zero().amplitudes().dot(t_one().amplitudes());
  CHECK(std::abs(overlap) < 1e-14);
}
