#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "msd/stabilizer_code.hpp"
#include "msd/states.hpp"

namespace msd {

struct RoundResult {
  double success_probability = 0.0;      // Tr(P rho); |lambda|^2 on pure input
  std::optional<DensityOperator> output; // absent when the round cannot succeed
  double output_t_fidelity = 0.0;
};

struct DistillationTrace {
  enum class Verdict { kDistilled, kUndistillable };
  std::vector<std::pair<double, double>> rounds;  // (p_k, F_k)
  Verdict verdict = Verdict::kUndistillable;
  int rounds_used = 0;
  double cost = -1.0;  // prod_k 5/p_k when distilled, -1 sentinel otherwise
};

struct CurvePoint {
  double epsilon;
  double input_fidelity;
  double output_fidelity;
  double success_probability;
};

struct SweepRow {
  double parameter;
  int round;
  double success_probability;
  double t_fidelity;
};

// One round of the five-qubit protocol: project onto the code subspace and
// read the logical qubit out in the frame |0_L> = P|00000> (normalized),
// X_L = XXXXX. Any other decoding frame differs by a fixed single-qubit
// Clifford on the output, and the T-fidelity maximizes over the Clifford
// orbit, so every reported fidelity is frame-independent.
class DistillationEngine {
 public:
  DistillationEngine();

  const StabilizerCode& code() const { return code_; }
  const Mat& projector() const { return projector_; }
  const QubitRegisterState& logical_zero() const { return logical_zero_; }
  const QubitRegisterState& logical_one() const { return logical_one_; }

  RoundResult bk_round(const DensityOperator& rho5) const;

  // Round 1 consumes first_input; each later round consumes the previous
  // normalized output to the fifth tensor power.
  DistillationTrace iterate(const DensityOperator& first_input,
                            double target_fidelity, int max_rounds = 15) const;

  // (1-eps)|T0><T0| + eps|T1><T1| per qubit, five copies.
  DensityOperator t_axis_product_input(double epsilon) const;

  std::vector<CurvePoint> output_fidelity_curve(
      const std::vector<double>& epsilon_grid) const;

  // Bisection of F_out(eps) = 1 - eps over [0.05, 0.25] to 1e-5.
  double threshold() const;

  // Round-by-round fidelities over a parametrized family; rounds run to the
  // fixed depth with no early stop so later-round curves are complete.
  std::vector<SweepRow> distillability_sweep(
      const std::function<DensityOperator(double)>& family,
      const std::vector<double>& parameter_grid, int rounds) const;

  static constexpr double kZeroSuccessGuard = 1e-12;

 private:
  StabilizerCode code_;
  Mat projector_;
  QubitRegisterState logical_zero_;
  QubitRegisterState logical_one_;
};

}  // namespace msd
