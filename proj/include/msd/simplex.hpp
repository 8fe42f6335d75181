#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace msd {

// Equality-form linear program  min c.x  s.t.  A x = b, x >= 0,
// with A supplied column-wise in sparse form. Sized for the robustness
// programs: a few hundred rows, up to a few hundred thousand columns.
class LpColumnSource {
 public:
  virtual ~LpColumnSource() = default;
  virtual int num_rows() const = 0;
  virtual int num_columns() const = 0;
  // Writes (row, value) pairs of column j; returns the nonzero count.
  virtual int column(int j, std::pair<int, double>* out) const = 0;
  virtual double cost(int j) const = 0;
  // reduced[j] = (include_cost ? cost(j) : 0) - y . a_j for every column.
  virtual void price_all(const double* y, double* reduced,
                         bool include_cost) const = 0;
};

struct LpOptions {
  double pivot_tol = 1e-9;
  double cost_tol = 1e-9;
  double feas_tol = 1e-8;
  int max_iterations = 200000;
  int refactor_interval = 64;
  int stall_limit = 512;  // degenerate steps before switching to Bland's rule
};

struct LpResult {
  enum class Status {
    kOptimal,
    kInfeasible,
    kIterationLimit,
    kNumericalTrouble,
  };
  Status status = Status::kNumericalTrouble;
  double objective = 0.0;
  std::vector<std::pair<int, double>> solution;  // nonzero structural vars
  std::vector<double> duals;                     // y at the final basis
  int iterations = 0;
  double residual = 0.0;  // max |A x - b| at the returned point
};

LpResult solve_equality_lp(const LpColumnSource& source,
                           const std::vector<double>& b,
                           const LpOptions& options = {});

}  // namespace msd
