#include "msd/state_factory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "msd/clifford.hpp"
#include "msd/csv.hpp"
#include "msd/magic.hpp"
#include "msd/pauli.hpp"
#include "msd/rng.hpp"

namespace msd {

namespace {

void check_alpha(double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("alpha outside [0, 1]");
  }
}

Vec state_power(const Vec& single, int n) {
  Vec acc = single;
  for (int k = 1; k < n; ++k) {
    Vec next(acc.size() * 2);
    for (Eigen::Index i = 0; i < acc.size(); ++i) {
      next(2 * i) = acc(i) * single(0);
      next(2 * i + 1) = acc(i) * single(1);
    }
    acc.swap(next);
  }
  return acc;
}

}  // namespace

QubitRegisterState phase_ghz(const PhaseGhzSpec& spec) {
  check_alpha(spec.alpha);
  const double beta = std::sqrt(std::max(0.0, 1.0 - spec.alpha * spec.alpha));
  Vec v = Vec::Zero(dim_of(spec.n));
  v(0) = spec.alpha;
  v(v.size() - 1) = std::polar(beta, spec.phi);
  return QubitRegisterState(spec.n, std::move(v));
}

QubitRegisterState ghz_t(const GhzTSpec& spec) {
  check_alpha(spec.alpha);
  const double beta = std::sqrt(std::max(0.0, 1.0 - spec.alpha * spec.alpha));
  const Vec t0 = state_power(t_zero().amplitudes(), spec.n);
  const Vec t1 = state_power(t_one().amplitudes(), spec.n);
  Vec v = spec.alpha * t0 + std::polar(beta, spec.phi) * t1;
  return QubitRegisterState(spec.n, std::move(v));
}

QubitRegisterState composite(const CompositeSpec& spec) {
  int total = spec.zero_pad;
  for (const auto& b : spec.blocks) total += b.size;
  if (total != 5) {
    throw std::invalid_argument("composite blocks plus padding must cover "
                                "exactly 5 qubits");
  }
  Vec acc(1);
  acc(0) = 1.0;
  int n_acc = 0;
  auto append = [&acc, &n_acc](const Vec& block, int nb) {
    Vec next(acc.size() * block.size());
    for (Eigen::Index i = 0; i < acc.size(); ++i) {
      for (Eigen::Index j = 0; j < block.size(); ++j) {
        next(i * block.size() + j) = acc(i) * block(j);
      }
    }
    acc.swap(next);
    n_acc += nb;
  };
  for (const auto& b : spec.blocks) {
    if (b.family == CompositeSpec::BlockFamily::kPhaseGhz) {
      append(phase_ghz({b.size, b.alpha, b.phi}).amplitudes(), b.size);
    } else {
      append(ghz_t({b.size, b.alpha, b.phi}).amplitudes(), b.size);
    }
  }
  for (int q = 0; q < spec.zero_pad; ++q) {
    Vec zero(2);
    zero << 1.0, 0.0;
    append(zero, 1);
  }
  return QubitRegisterState(n_acc, std::move(acc));
}

QubitRegisterState misaligned_product(const MisalignedSpinSpec& spec) {
  auto rng = make_stream(spec.seed, 0);
  Vec acc(1);
  acc(0) = 1.0;
  for (int q = 0; q < 5; ++q) {
    const double theta = uniform_in(rng, spec.theta_bar - spec.theta_max,
                                    spec.theta_bar + spec.theta_max);
    Vec spin(2);
    spin << std::cos(theta), std::sin(theta);
    Vec next(acc.size() * 2);
    for (Eigen::Index i = 0; i < acc.size(); ++i) {
      next(2 * i) = acc(i) * spin(0);
      next(2 * i + 1) = acc(i) * spin(1);
    }
    acc.swap(next);
  }
  return QubitRegisterState(5, std::move(acc));
}

MixedNearTSpec near_t_defaults() {
  MixedNearTSpec spec;
  spec.beta_bar = t_state_angle();
  spec.phi = M_PI / 4;
  return spec;
}

DensityOperator mixed_near_t(const MixedNearTSpec& spec) {
  const double p_lo = std::max(0.0, spec.p_bar - spec.p_max);
  const double p_hi = std::min(1.0, spec.p_bar + spec.p_max);
  if (p_lo > p_hi) {
    throw std::invalid_argument("probability interval escapes [0, 1]");
  }
  auto rng = make_stream(spec.seed, 0);
  Mat acc(1, 1);
  acc(0, 0) = 1.0;
  for (int q = 0; q < 5; ++q) {
    const double beta = uniform_in(rng, spec.beta_bar - spec.beta_max,
                                   spec.beta_bar + spec.beta_max);
    const double p = uniform_in(rng, p_lo, p_hi);
    Vec tau0(2), tau1(2);
    tau0 << std::cos(beta), std::polar(std::sin(beta), spec.phi);
    tau1 << -std::sin(beta), std::polar(std::cos(beta), spec.phi);
    const Mat site = p * (tau0 * tau0.adjoint()) +
                     (1.0 - p) * (tau1 * tau1.adjoint());
    Mat next(acc.rows() * 2, acc.cols() * 2);
    for (Eigen::Index i = 0; i < acc.rows(); ++i) {
      for (Eigen::Index j = 0; j < acc.cols(); ++j) {
        next.block(i * 2, j * 2, 2, 2) = acc(i, j) * site;
      }
    }
    acc.swap(next);
  }
  return DensityOperator(5, std::move(acc));
}

namespace {

CollectiveSpinOps build_collective_spin_ops() {
  CollectiveSpinOps ops;
  const int d = 32;
  ops.sx = Mat::Zero(d, d);
  ops.sy = Mat::Zero(d, d);
  ops.sz = Mat::Zero(d, d);
  for (int q = 0; q < 5; ++q) {
    uint32_t x = 1u << q;
    ops.sx += 0.5 * PauliString(5, x, 0).to_matrix();
    ops.sy += 0.5 * PauliString(5, x, x).to_matrix();
    ops.sz += 0.5 * PauliString(5, 0, x).to_matrix();
  }
  ops.s_plus = ops.sx + cxd(0, 1) * ops.sy;
  ops.s_minus = ops.sx - cxd(0, 1) * ops.sy;
  // Dicke states |S=5/2, S_z=5/2-k>: uniform superpositions of weight-k
  // basis states.
  ops.symmetric_projector = Mat::Zero(d, d);
  for (int k = 0; k <= 5; ++k) {
    Vec v = Vec::Zero(d);
    for (uint32_t b = 0; b < 32; ++b) {
      if (std::popcount(b) == k) v(b) = 1.0;
    }
    v.normalize();
    ops.symmetric_projector += v * v.adjoint();
    ops.dicke.push_back(std::move(v));
  }
  return ops;
}

// Cached spectral data for the two squeezing Hamiltonians restricted to the
// symmetric block.
struct SqueezeSpectrum {
  Eigen::VectorXd eigenvalues;
  Mat eigenvectors;
};

SqueezeSpectrum decompose(const Mat& h) {
  Mat herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat exp_from_spectrum(const SqueezeSpectrum& s, double t) {
  Vec phases(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, -t * s.eigenvalues(i));
  }
  return s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
}

}  // namespace

const CollectiveSpinOps& collective_spin_ops() {
  static const CollectiveSpinOps ops = build_collective_spin_ops();
  return ops;
}

Mat one_axis_twist(double t) {
  const auto& ops = collective_spin_ops();
  static const SqueezeSpectrum spec = decompose(
      ops.symmetric_projector * ops.sz * ops.sz * ops.symmetric_projector);
  return exp_from_spectrum(spec, t);
}

Mat two_axis_countertwist(double t) {
  const auto& ops = collective_spin_ops();
  static const SqueezeSpectrum spec = decompose(
      ops.symmetric_projector *
      ((ops.s_plus * ops.s_plus - ops.s_minus * ops.s_minus) / cxd(0, 2)) *
      ops.symmetric_projector);
  return exp_from_spectrum(spec, t);
}

QubitRegisterState apply_unitary(const Mat& u, const QubitRegisterState& psi) {
  return QubitRegisterState(psi.n_qubits(), u * psi.amplitudes());
}

DensityOperator apply_unitary(const Mat& u, const DensityOperator& rho) {
  return DensityOperator(rho.n_qubits(), u * rho.matrix() * u.adjoint());
}

QubitRegisterState haar_random_pure(int n_qubits, uint64_t seed) {
  auto rng = make_stream(seed, 0);
  Vec v(dim_of(n_qubits));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = cxd(standard_normal(rng), standard_normal(rng));
  }
  v.normalize();
  return QubitRegisterState(n_qubits, std::move(v));
}

std::pair<QubitRegisterState, SampleStats> sample_distillable(
    const DistillationEngine& engine, const DistillableSampleOptions& options,
    uint64_t seed) {
  if (options.lambda_min <= 0.0 || options.lambda_min >= 1.0) {
    throw std::invalid_argument("lambda_min outside (0, 1)");
  }
  const double fidelity_min = options.fidelity_min;
  if (fidelity_min < 0.0) {
    throw std::invalid_argument("fidelity_min must be resolved by the caller");
  }
  SampleStats stats;
  auto rng = make_stream(seed, 0);
  const Vec& l0 = engine.logical_zero().amplitudes();
  const Vec& l1 = engine.logical_one().amplitudes();
  Vec v(32);
  while (stats.attempts < options.max_attempts) {
    ++stats.attempts;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = cxd(standard_normal(rng), standard_normal(rng));
    }
    v.normalize();
    // Pure input: lambda^2 = <psi|P|psi> = |<0_L|psi>|^2 + |<1_L|psi>|^2.
    const cxd a = l0.dot(v);
    const cxd b = l1.dot(v);
    const double lambda_sq = std::norm(a) + std::norm(b);
    if (std::sqrt(lambda_sq) <= options.lambda_min) continue;
    Mat out(2, 2);
    out << std::norm(a), a * std::conj(b), b * std::conj(a), std::norm(b);
    out /= lambda_sq;
    if (t_fidelity(DensityOperator(1, std::move(out))) <= fidelity_min) {
      continue;
    }
    stats.accepted = 1;
    return {QubitRegisterState(5, std::move(v)), stats};
  }
  throw std::runtime_error("sample_distillable exhausted max_attempts");
}

DensityOperator StateFamilySpec::realize() const {
  switch (family) {
    case Family::kPhaseGhz:
      return DensityOperator::pure(phase_ghz({n, alpha, phi}));
    case Family::kGhzT:
      return DensityOperator::pure(ghz_t({n, alpha, phi}));
    case Family::kComposite:
      return DensityOperator::pure(composite({blocks, zero_pad}));
    case Family::kProduct: {
      const Mat one =
          (1.0 - epsilon) * DensityOperator::pure(t_zero()).matrix() +
          epsilon * DensityOperator::pure(t_one()).matrix();
      return tensor_power(DensityOperator(1, one), 5);
    }
    case Family::kMisaligned:
      return DensityOperator::pure(misaligned_product(misaligned));
    case Family::kMixedNearT:
      return mixed_near_t(mixed);
  }
  throw std::logic_error("unknown family");
}

QubitRegisterState StateFamilySpec::realize_pure() const {
  switch (family) {
    case Family::kPhaseGhz:
      return phase_ghz({n, alpha, phi});
    case Family::kGhzT:
      return ghz_t({n, alpha, phi});
    case Family::kComposite:
      return composite({blocks, zero_pad});
    case Family::kMisaligned:
      return misaligned_product(misaligned);
    case Family::kProduct:
    case Family::kMixedNearT:
      throw std::invalid_argument("family has no pure amplitude vector");
  }
  throw std::logic_error("unknown family");
}

std::string StateFamilySpec::family_name(Family f) {
  switch (f) {
    case Family::kPhaseGhz: return "pg";
    case Family::kGhzT: return "gt";
    case Family::kComposite: return "composite";
    case Family::kProduct: return "product";
    case Family::kMisaligned: return "misaligned";
    case Family::kMixedNearT: return "mixed_near_t";
  }
  throw std::logic_error("unknown family");
}

StateFamilySpec::Family StateFamilySpec::family_from_name(
    const std::string& name) {
  if (name == "pg") return Family::kPhaseGhz;
  if (name == "gt") return Family::kGhzT;
  if (name == "composite") return Family::kComposite;
  if (name == "product") return Family::kProduct;
  if (name == "misaligned") return Family::kMisaligned;
  if (name == "mixed_near_t") return Family::kMixedNearT;
  throw std::invalid_argument("unknown family name: " + name);
}

nlohmann::json StateFamilySpec::to_json() const {
  nlohmann::json j{{"family", family_name(family)}, {"n", n},
                   {"alpha", alpha},                {"phi", phi},
                   {"epsilon", epsilon},            {"seed", seed}};
  if (family == Family::kComposite) {
    j["zero_pad"] = zero_pad;
    nlohmann::json bl = nlohmann::json::array();
    for (const auto& b : blocks) {
      bl.push_back({{"family", b.family == CompositeSpec::BlockFamily::kPhaseGhz
                                   ? "pg"
                                   : "gt"},
                    {"size", b.size},
                    {"alpha", b.alpha},
                    {"phi", b.phi}});
    }
    j["blocks"] = bl;
  }
  if (family == Family::kMisaligned) {
    j["theta_bar"] = misaligned.theta_bar;
    j["theta_max"] = misaligned.theta_max;
  }
  if (family == Family::kMixedNearT) {
    j["beta_bar"] = mixed.beta_bar;
    j["beta_max"] = mixed.beta_max;
    j["p_bar"] = mixed.p_bar;
    j["p_max"] = mixed.p_max;
  }
  return j;
}

StateFamilySpec StateFamilySpec::from_json(const nlohmann::json& j) {
  StateFamilySpec spec;
  spec.family = family_from_name(j.at("family").get<std::string>());
  spec.n = j.value("n", 5);
  spec.alpha = j.value("alpha", M_SQRT1_2);
  spec.phi = j.value("phi", M_PI / 4);
  spec.epsilon = j.value("epsilon", 0.0);
  spec.seed = j.value("seed", uint64_t{0});
  spec.zero_pad = j.value("zero_pad", 0);
  if (j.contains("blocks")) {
    for (const auto& b : j.at("blocks")) {
      spec.blocks.push_back(
          {b.at("family").get<std::string>() == "pg"
               ? CompositeSpec::BlockFamily::kPhaseGhz
               : CompositeSpec::BlockFamily::kGhzT,
           b.at("size").get<int>(), b.at("alpha").get<double>(),
           b.value("phi", M_PI / 4)});
    }
  }
  spec.misaligned.theta_bar = j.value("theta_bar", M_PI / 4);
  spec.misaligned.theta_max = j.value("theta_max", 0.05);
  spec.misaligned.seed = spec.seed;
  spec.mixed = near_t_defaults();
  spec.mixed.beta_bar = j.value("beta_bar", spec.mixed.beta_bar);
  spec.mixed.beta_max = j.value("beta_max", 0.0);
  spec.mixed.p_max = j.value("p_max", 0.0);
  spec.mixed.p_bar = j.value("p_bar", 1.0 - spec.mixed.p_max);
  spec.mixed.phi = j.value("phi", spec.mixed.phi);
  spec.mixed.seed = spec.seed;
  return spec;
}

void write_amplitudes_csv(const QubitRegisterState& psi,
                          const std::filesystem::path& file) {
  CsvWriter w(file, {"basis_index", "real", "imag"});
  for (int i = 0; i < psi.dim(); ++i) {
    w.cell(i);
    w.cell(psi.amplitude(i).real());
    w.cell(psi.amplitude(i).imag());
    w.end_row();
  }
  w.close();
}

QubitRegisterState read_amplitudes_csv(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  std::string line;
  std::getline(is, line);  // header
  std::vector<cxd> amps;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string idx, re, im;
    if (!std::getline(ss, idx, ',') || !std::getline(ss, re, ',') ||
        !std::getline(ss, im, ',')) {
      throw std::runtime_error("malformed amplitude row: " + line);
    }
    amps.emplace_back(std::stod(re), std::stod(im));
  }
  const int n = static_cast<int>(std::llround(std::log2(amps.size())));
  if (amps.empty() || (1u << n) != amps.size()) {
    throw std::runtime_error("amplitude count is not a power of two");
  }
  Vec v(amps.size());
  for (size_t i = 0; i < amps.size(); ++i) v(i) = amps[i];
  return QubitRegisterState(n, std::move(v));
}

}  // namespace msd
