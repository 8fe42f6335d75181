#include <doctest.h>

#include <cmath>

#include "msd/clifford.hpp"
#include "msd/distillation.hpp"
#include "msd/magic.hpp"
#include "msd/state_factory.hpp"
#include "oracles.hpp"

using namespace msd;

TEST_CASE("phase ghz") {
  const auto all_zero = phase_ghz({5, 1.0, 0.3});
  CHECK(std::abs(all_zero.amplitude(0) - 1.0) < 1e-15);

  const auto ghz = phase_ghz({5, M_SQRT1_2, M_PI / 4});
  CHECK(std::abs(ghz.amplitude(0) - M_SQRT1_2) < 1e-15);
  CHECK(std::abs(ghz.amplitude(31) -
                 std::polar(M_SQRT1_2, M_PI / 4)) < 1e-15);
  for (int i = 1; i < 31; ++i) CHECK(std::abs(ghz.amplitude(i)) < 1e-15);

  CHECK_THROWS_AS(phase_ghz({5, 1.5, 0.0}), std::invalid_argument);
}

TEST_CASE("ghz-t marginals") {
  const auto t0 = DensityOperator::pure(t_zero()).matrix();
  const auto t1 = DensityOperator::pure(t_one()).matrix();

  const auto pure_t = ghz_t({5, 1.0, M_PI / 4});
  const auto t5 = tensor_power(DensityOperator::pure(t_zero()), 5);
  CHECK((DensityOperator::pure(pure_t).matrix() - t5.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  for (double a2 : {0.17, 0.5, 0.83}) {
    const auto gt = DensityOperator::pure(ghz_t({5, std::sqrt(a2), M_PI / 4}));
    const Mat expect = a2 * t0 + (1 - a2) * t1;
    for (int q = 0; q < 5; ++q) {
      const auto red = partial_trace(gt, SubsystemIndex{q});
      const DensityOperator expect_op(1, expect);
      CHECK(trace_distance(red, expect_op) < 1e-10);
    }
  }
}

TEST_CASE("composite layouts") {
  // A single full-size block reproduces phase_ghz.
  CompositeSpec one;
  one.blocks = {{CompositeSpec::BlockFamily::kPhaseGhz, 5, 0.6, 0.9}};
  const auto a = composite(one);
  const auto b = phase_ghz({5, 0.6, 0.9});
  CHECK((a.amplitudes() - b.amplitudes()).norm() < 1e-14);

  // Padded qubits reduce to |0><0| exactly.
  CompositeSpec padded;
  padded.blocks = {{CompositeSpec::BlockFamily::kGhzT, 2, 0.7, M_PI / 4},
                   {CompositeSpec::BlockFamily::kGhzT, 2, 0.7, M_PI / 4}};
  padded.zero_pad = 1;
  const auto rho = DensityOperator::pure(composite(padded));
  const auto red = partial_trace(rho, SubsystemIndex{4});
  Mat zero = Mat::Zero(2, 2);
  zero(0, 0) = 1.0;
  CHECK((red.matrix() - zero).cwiseAbs().maxCoeff() < 1e-14);

  // Block structure: the first two qubits carry the first block's marginal.
  const auto red01 = partial_trace(rho, SubsystemIndex{0, 1});
  const auto block = DensityOperator::pure(ghz_t({2, 0.7, M_PI / 4}));
  CHECK(trace_distance(red01, block) < 1e-12);

  CompositeSpec bad;
  bad.blocks = {{CompositeSpec::BlockFamily::kPhaseGhz, 3, 0.5, 0.0}};
  bad.zero_pad = 1;
  CHECK_THROWS_AS(composite(bad), std::invalid_argument);
}

TEST_CASE("phase ghz with stabilizer parameters has no magic") {
  for (double phi : {0.0, M_PI / 2}) {
    const auto pg4 = phase_ghz({4, M_SQRT1_2, phi});
    DictionarySet dicts(std::filesystem::temp_directory_path() /
                        "msd_factory_cache");
    CHECK(rom(DensityOperator::pure(pg4), dicts.get(4)).rom ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("misaligned product spins") {
  const auto plus = misaligned_product({M_PI / 4, 0.0, 7});
  for (int i = 0; i < 32; ++i) {
    CHECK(std::abs(plus.amplitude(i) - cxd(1.0 / std::sqrt(32.0), 0.0)) <
          1e-12);
  }
  const auto zero = misaligned_product({0.0, 0.0, 7});
  CHECK(std::abs(zero.amplitude(0) - 1.0) < 1e-12);

  // Bit-reproducible per seed; different seeds differ.
  const MisalignedSpinSpec spec{M_PI / 4, 0.05, 12345};
  const auto s1 = misaligned_product(spec);
  const auto s2 = misaligned_product(spec);
  CHECK((s1.amplitudes() - s2.amplitudes()).norm() == 0.0);
  const auto s3 = misaligned_product({M_PI / 4, 0.05, 54321});
  CHECK((s1.amplitudes() - s3.amplitudes()).norm() > 1e-6);
}

TEST_CASE("mixed near-T family") {
  MixedNearTSpec spec = near_t_defaults();
  spec.seed = 5;
  const auto rho = mixed_near_t(spec);  // p_bar = 1, widths 0: exact T
  const auto t5 = tensor_power(DensityOperator::pure(t_zero()), 5);
  CHECK(trace_distance(rho, t5) < 1e-12);
  // Purity 1 whenever every p_i is 1.
  CHECK(std::abs((rho.matrix() * rho.matrix()).trace().real() - 1.0) < 1e-10);

  // The near-stabilizer variant of the family.
  MixedNearTSpec stab = near_t_defaults();
  stab.beta_bar = M_PI / 4;
  stab.beta_max = 0.05;
  stab.phi = 0.0;
  stab.p_max = 0.02;
  stab.p_bar = 1.0 - stab.p_max;
  stab.seed = 11;
  const auto mixed = mixed_near_t(stab);
  CHECK(std::abs(mixed.matrix().trace().real() - 1.0) < 1e-12);
  const double purity = (mixed.matrix() * mixed.matrix()).trace().real();
  CHECK(purity < 1.0);
  CHECK(purity > 0.8);

  MixedNearTSpec bad = near_t_defaults();
  bad.p_bar = 3.0;
  bad.p_max = 0.5;
  CHECK_THROWS_AS(mixed_near_t(bad), std::invalid_argument);
}

TEST_CASE("collective spin algebra") {
  const auto& ops = collective_spin_ops();
  CHECK((ops.sx * ops.sy - ops.sy * ops.sx - cxd(0, 1) * ops.sz)
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK((ops.sy * ops.sz - ops.sz * ops.sy - cxd(0, 1) * ops.sx)
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK(std::abs(ops.symmetric_projector.trace().real() - 6.0) < 1e-12);
  for (const Mat* s : {&ops.sx, &ops.sy, &ops.sz}) {
    CHECK((ops.symmetric_projector * (*s) - (*s) * ops.symmetric_projector)
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }

  // S_z |00000> = +5/2 |00000>.
  Vec e0 = Vec::Zero(32);
  e0(0) = 1.0;
  CHECK((ops.sz * e0 - 2.5 * e0).norm() < 1e-12);

  // S^2 = S(S+1) = 8.75 on each Dicke vector; overlaps with |+++++>.
  const Mat s2 = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
  Vec plus = Vec::Ones(32) / std::sqrt(32.0);
  for (int k = 0; k <= 5; ++k) {
    CHECK((s2 * ops.dicke[k] - 8.75 * ops.dicke[k]).norm() < 1e-10);
    const double overlap = std::abs(ops.dicke[k].dot(plus));
    double binom = 1.0;
    for (int i = 0; i < k; ++i) binom = binom * (5 - i) / (i + 1);
    CHECK(overlap == doctest::Approx(std::sqrt(binom / 32.0)).epsilon(1e-12));
  }
}

TEST_CASE("squeezing unitaries") {
  const auto& ops = collective_spin_ops();
  const Mat id = Mat::Identity(32, 32);

  CHECK((one_axis_twist(0.0) - id).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((two_axis_countertwist(0.0) - id).cwiseAbs().maxCoeff() < 1e-12);

  for (double t : {0.3, 1.1, 2.9}) {
    for (const Mat& u : {one_axis_twist(t), two_axis_countertwist(t)}) {
      CHECK((u * u.adjoint() - id).cwiseAbs().maxCoeff() < 1e-10);
      // Symmetric subspace and complement evolve separately.
      CHECK(((id - ops.symmetric_projector) * u * ops.symmetric_projector)
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
  }

  // One-axis twisting only phases the Dicke states: e^{-i t (5/2-k)^2}.
  const double t = 0.77;
  const Mat u = one_axis_twist(t);
  for (int k = 0; k <= 5; ++k) {
    const double m = 2.5 - k;
    const cxd expect = std::polar(1.0, -t * m * m);
    CHECK((u * ops.dicke[k] - expect * ops.dicke[k]).norm() < 1e-10);
  }
  // |00000> is a Dicke state, so it only picks up a global phase.
  Vec e0 = Vec::Zero(32);
  e0(0) = 1.0;
  const Vec evolved = u * e0;
  CHECK(std::abs(std::abs(evolved(0)) - 1.0) < 1e-12);
}

TEST_CASE("haar sampling") {
  const auto psi = haar_random_pure(5, 42);
  CHECK(std::abs(psi.amplitudes().norm() - 1.0) < 1e-12);
  const auto psi2 = haar_random_pure(5, 42);
  CHECK((psi.amplitudes() - psi2.amplitudes()).norm() == 0.0);
  const auto psi3 = haar_random_pure(5, 43);
  CHECK((psi.amplitudes() - psi3.amplitudes()).norm() > 1e-3);

  // Mean overlap with the rank-2 code subspace: 2/32, +-0.005 at 1e4 samples.
  const DistillationEngine engine;
  const Mat& p = engine.projector();
  double mean = 0.0;
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) {
    const auto v = haar_random_pure(5, 1000 + s);
    mean += std::real(v.amplitudes().dot(p * v.amplitudes()));
  }
  mean /= samples;
  CHECK(std::abs(mean - 0.0625) < 0.005);
}

TEST_CASE("rejection sampler honors its acceptance predicate") {
  const DistillationEngine engine;
  DistillableSampleOptions opt;
  opt.fidelity_min = 1.0 - 0.17267316;
  const auto [psi, stats] = sample_distillable(engine, opt, 7);
  CHECK(stats.accepted == 1);
  CHECK(stats.attempts >= 1);
  const auto r = engine.bk_round(DensityOperator::pure(psi));
  CHECK(std::sqrt(r.success_probability) > opt.lambda_min);
  CHECK(r.output_t_fidelity > opt.fidelity_min);

  // Unresolved fidelity floor is a caller bug.
  DistillableSampleOptions unresolved;
  CHECK_THROWS_AS(sample_distillable(engine, unresolved, 7),
                  std::invalid_argument);
}

TEST_CASE("family spec serialization round trip") {
  StateFamilySpec spec;
  spec.family = StateFamilySpec::Family::kComposite;
  spec.blocks = {{CompositeSpec::BlockFamily::kPhaseGhz, 2, 0.6, 0.1},
                 {CompositeSpec::BlockFamily::kGhzT, 2, 0.6, 0.2}};
  spec.zero_pad = 1;
  spec.seed = 99;
  const auto j = spec.to_json();
  const auto back = StateFamilySpec::from_json(j);
  CHECK(back.family == spec.family);
  CHECK(back.blocks.size() == 2);
  CHECK(back.zero_pad == 1);
  CHECK(back.seed == 99);
  const auto rho1 = spec.realize();
  const auto rho2 = back.realize();
  CHECK((rho1.matrix() - rho2.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  // Amplitude CSV round trip.
  const auto file = std::filesystem::temp_directory_path() / "msd_amp.csv";
  const auto psi = ghz_t({3, 0.8, M_PI / 4});
  write_amplitudes_csv(psi, file);
  const auto back_psi = read_amplitudes_csv(file);
  CHECK(back_psi.n_qubits() == 3);
  CHECK((back_psi.amplitudes() - psi.amplitudes()).norm() < 1e-10);
  std::filesystem::remove(file);
}
