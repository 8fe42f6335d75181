#include "msd/distillation.hpp"

#include <cmath>
#include <stdexcept>

#include "msd/clifford.hpp"
#include "msd/magic.hpp"

namespace msd {

DistillationEngine::DistillationEngine()
    : code_(five_qubit_code()),
      projector_(code_projector(code_).matrix),
      logical_zero_(QubitRegisterState::basis_state(5, 0)),
      logical_one_(QubitRegisterState::basis_state(5, 1)) {
  auto [l0, l1] = logical_basis(code_);
  logical_zero_ = std::move(l0);
  logical_one_ = std::move(l1);
}

RoundResult DistillationEngine::bk_round(const DensityOperator& rho5) const {
  if (rho5.n_qubits() != 5) {
    throw std::invalid_argument("bk_round expects a 5-qubit state");
  }
  RoundResult out;
  const Mat& rho = rho5.matrix();
  const Vec& l0 = logical_zero_.amplitudes();
  const Vec& l1 = logical_one_.amplitudes();
  const cxd r00 = l0.dot(rho * l0);
  const cxd r01 = l0.dot(rho * l1);
  const cxd r11 = l1.dot(rho * l1);
  out.success_probability = std::real(r00 + r11);
  if (out.success_probability < kZeroSuccessGuard) {
    out.success_probability = std::max(out.success_probability, 0.0);
    return out;  // flagged zero-success result, no output
  }
  Mat logical(2, 2);
  logical << r00, r01, std::conj(r01), r11;
  logical /= out.success_probability;
  out.output = DensityOperator(1, std::move(logical));
  out.output_t_fidelity = t_fidelity(*out.output);
  return out;
}

DistillationTrace DistillationEngine::iterate(const DensityOperator& first_input,
                                              double target_fidelity,
                                              int max_rounds) const {
  if (target_fidelity <= 0.5 || target_fidelity > 1.0) {
    throw std::invalid_argument("target fidelity must lie in (0.5, 1]");
  }
  if (max_rounds < 1) {
    throw std::invalid_argument("max_rounds must be >= 1");
  }
  DistillationTrace trace;
  DensityOperator current = first_input;
  for (int k = 0; k < max_rounds; ++k) {
    const RoundResult round = bk_round(current);
    if (!round.output.has_value()) {
      trace.verdict = DistillationTrace::Verdict::kUndistillable;
      trace.cost = -1.0;
      return trace;
    }
    trace.rounds.emplace_back(round.success_probability,
                              round.output_t_fidelity);
    if (round.output_t_fidelity >= target_fidelity) {
      trace.verdict = DistillationTrace::Verdict::kDistilled;
      trace.rounds_used = static_cast<int>(trace.rounds.size());
      trace.cost = 1.0;
      for (const auto& [p, f] : trace.rounds) trace.cost *= 5.0 / p;
      return trace;
    }
    current = tensor_power(*round.output, 5);
  }
  trace.verdict = DistillationTrace::Verdict::kUndistillable;
  trace.rounds_used = static_cast<int>(trace.rounds.size());
  trace.cost = -1.0;
  return trace;
}

DensityOperator DistillationEngine::t_axis_product_input(double epsilon) const {
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw std::invalid_argument("epsilon outside [0, 1]");
  }
  const Mat one = (1.0 - epsilon) * DensityOperator::pure(t_zero()).matrix() +
                  epsilon * DensityOperator::pure(t_one()).matrix();
  return tensor_power(DensityOperator(1, one), 5);
}

std::vector<CurvePoint> DistillationEngine::output_fidelity_curve(
    const std::vector<double>& epsilon_grid) const {
  std::vector<CurvePoint> out;
  out.reserve(epsilon_grid.size());
  for (double eps : epsilon_grid) {
    if (eps < 0.0 || eps > 0.5) {
      throw std::invalid_argument("curve epsilon outside [0, 0.5]");
    }
    const RoundResult r = bk_round(t_axis_product_input(eps));
    out.push_back({eps, 1.0 - eps, r.output_t_fidelity, r.success_probability});
  }
  return out;
}

double DistillationEngine::threshold() const {
  auto g = [this](double eps) {
    const RoundResult r = bk_round(t_axis_product_input(eps));
    return r.output_t_fidelity - (1.0 - eps);
  };
  double lo = 0.05, hi = 0.25;
  if (g(lo) <= 0.0 || g(hi) >= 0.0) {
    throw std::runtime_error("threshold bracket lost its sign change");
  }
  while (hi - lo > 1e-5) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<SweepRow> DistillationEngine::distillability_sweep(
    const std::function<DensityOperator(double)>& family,
    const std::vector<double>& parameter_grid, int rounds) const {
  std::vector<SweepRow> table;
  for (double param : parameter_grid) {
    DensityOperator current = family(param);
    for (int k = 1; k <= rounds; ++k) {
      const RoundResult r = bk_round(current);
      if (!r.output.has_value()) {
        table.push_back({param, k, r.success_probability, 0.0});
        break;
      }
      table.push_back({param, k, r.success_probability, r.output_t_fidelity});
      if (k < rounds) current = tensor_power(*r.output, 5);
    }
  }
  return table;
}

}  // namespace msd
