#include <doctest.h>

#include <cmath>

#include "msd/clifford.hpp"
#include "msd/pauli.hpp"
#include "msd/rng.hpp"
#include "msd/state_factory.hpp"
#include "msd/states.hpp"
#include "oracles.hpp"

using namespace msd;

namespace {

DensityOperator random_density(int n, uint64_t seed) {
  auto rng = make_stream(seed, 0);
  const int d = dim_of(n);
  Mat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      g(i, j) = cxd(standard_normal(rng), standard_normal(rng));
    }
  }
  Mat rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityOperator(n, std::move(rho));
}

Mat random_unitary(int d, uint64_t seed) {
  auto rng = make_stream(seed, 1);
  Mat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      g(i, j) = cxd(standard_normal(rng), standard_normal(rng));
    }
  }
  Eigen::HouseholderQR<Mat> qr(g);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("state and operator invariants are enforced") {
  Vec bad(4);
  bad << 1.0, 1.0, 0.0, 0.0;  // norm sqrt(2)
  CHECK_THROWS_AS(QubitRegisterState(2, bad), std::invalid_argument);
  CHECK_THROWS_AS(QubitRegisterState(1, Vec::Ones(4) / 2.0),
                  std::invalid_argument);

  Mat not_herm = Mat::Zero(2, 2);
  not_herm(0, 1) = 1.0;
  not_herm(0, 0) = 1.0;
  CHECK_THROWS_AS(DensityOperator(1, not_herm), std::invalid_argument);

  Mat bad_trace = Mat::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator(1, bad_trace), std::invalid_argument);

  Mat not_psd(2, 2);
  not_psd << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityOperator(1, not_psd), std::invalid_argument);

  CHECK_THROWS_AS(SubsystemIndex({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SubsystemIndex({2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SubsystemIndex(std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("tensor product basics") {
  const auto zero = QubitRegisterState::basis_state(1, 0);
  const auto z00 = tensor_product(zero, zero);
  CHECK(z00.n_qubits() == 2);
  CHECK(std::abs(z00.amplitude(0) - 1.0) < 1e-15);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(z00.amplitude(i)) < 1e-15);

  const auto mixed = DensityOperator::maximally_mixed(1);
  const auto mm = tensor_product(mixed, mixed);
  CHECK((mm.matrix() - Mat::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() <
        1e-15);

  // Too large for the configured register cap.
  const auto three = DensityOperator::maximally_mixed(3);
  CHECK_THROWS_AS(tensor_product(three, three), std::length_error);
}

TEST_CASE("partial trace round trips") {
  // |T0 T0> reduces to |T0><T0| on each qubit.
  const auto t0 = t_zero();
  const auto tt = tensor_product(t0, t0);
  const auto rho_tt = DensityOperator::pure(tt);
  const Mat expect = DensityOperator::pure(t0).matrix();
  for (int q = 0; q < 2; ++q) {
    const auto red = partial_trace(rho_tt, SubsystemIndex{q});
    CHECK((red.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
  }

  // GHZ2 reduces to I/2.
  Vec ghz(4);
  ghz << M_SQRT1_2, 0.0, 0.0, M_SQRT1_2;
  const auto bell = DensityOperator::pure(QubitRegisterState(2, ghz));
  const auto red = partial_trace(bell, SubsystemIndex{0});
  CHECK((red.matrix() - Mat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() <
        1e-12);

  // Product factorization, randomized.
  for (uint64_t s = 0; s < 5; ++s) {
    const auto a = random_density(1, 100 + s);
    const auto b = random_density(2, 200 + s);
    const auto joint = tensor_product(a, b);
    const auto back_a = partial_trace(joint, SubsystemIndex{0});
    const auto back_b = partial_trace(joint, SubsystemIndex{1, 2});
    CHECK((back_a.matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back_b.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }

  CHECK_THROWS_AS(
      partial_trace(DensityOperator::maximally_mixed(2), SubsystemIndex{5}),
      std::out_of_range);
}

TEST_CASE("fidelity with pure states") {
  const auto t0 = t_zero();
  CHECK(fidelity_with_pure(DensityOperator::pure(t0), t0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity_with_pure(DensityOperator::maximally_mixed(1), t0) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Eq-10-style family has input fidelity exactly 1 - eps.
  const double eps = 0.37;
  const Mat fam = (1 - eps) * DensityOperator::pure(t_zero()).matrix() +
                  eps * DensityOperator::pure(t_one()).matrix();
  CHECK(fidelity_with_pure(DensityOperator(1, fam), t_zero()) ==
        doctest::Approx(1 - eps).epsilon(1e-12));

  CHECK_THROWS_AS(
      fidelity_with_pure(DensityOperator::maximally_mixed(2), t0),
      std::invalid_argument);
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(DensityOperator::pure(t_zero())) < 1e-9);
  CHECK(von_neumann_entropy(DensityOperator::maximally_mixed(1)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const auto ghz5 = phase_ghz({5, M_SQRT1_2, 0.0});
  const auto red =
      partial_trace(DensityOperator::pure(ghz5), SubsystemIndex{2});
  CHECK(von_neumann_entropy(red) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-9));

  // Unitary invariance.
  for (uint64_t s = 0; s < 4; ++s) {
    const auto rho = random_density(2, 300 + s);
    const Mat u = random_unitary(4, s);
    const DensityOperator conj(2, u * rho.matrix() * u.adjoint());
    CHECK(std::abs(von_neumann_entropy(conj) - von_neumann_entropy(rho)) <
          1e-9);
  }
}

TEST_CASE("pauli expectation vector round trip") {
  const auto zero = DensityOperator::pure(QubitRegisterState::basis_state(1, 0));
  const Eigen::VectorXd c0 = pauli_expectation_vector(zero);
  CHECK(c0(0) == doctest::Approx(1.0));
  CHECK(c0(1) == doctest::Approx(0.0));
  CHECK(c0(2) == doctest::Approx(0.0));
  CHECK(c0(3) == doctest::Approx(1.0));

  const Eigen::VectorXd ct = pauli_expectation_vector(
      DensityOperator::pure(t_zero()));
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  CHECK(ct(0) == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) {
    CHECK(ct(i) == doctest::Approx(inv_sqrt3).epsilon(1e-12));
  }

  const Eigen::VectorXd cm =
      pauli_expectation_vector(DensityOperator::maximally_mixed(2));
  CHECK(cm(0) == doctest::Approx(1.0));
  for (int i = 1; i < 16; ++i) CHECK(std::abs(cm(i)) < 1e-14);

  for (uint64_t s = 0; s < 4; ++s) {
    const auto rho = random_density(2, 400 + s);
    const auto back = operator_from_pauli_vector(
        2, pauli_expectation_vector(rho));
    CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("trace distance") {
  const auto a = DensityOperator::pure(QubitRegisterState::basis_state(1, 0));
  const auto b = DensityOperator::pure(QubitRegisterState::basis_state(1, 1));
  CHECK(trace_distance(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_distance(a, a) < 1e-12);
}
