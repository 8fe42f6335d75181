#include "msd/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>

namespace msd {

namespace {

class RevisedSimplex {
 public:
  RevisedSimplex(const LpColumnSource& src, const std::vector<double>& b,
                 const LpOptions& opt)
      : src_(src),
        opt_(opt),
        m_(src.num_rows()),
        n_(src.num_columns()),
        b_(Eigen::Map<const Eigen::VectorXd>(b.data(), b.size())) {
    if (static_cast<int>(b.size()) != m_) {
      throw std::invalid_argument("rhs length != row count");
    }
    col_buf_.resize(m_);
    reduced_.resize(n_);
  }

  LpResult run() {
    init_artificial_basis();
    LpResult res;
    // Phase 1: minimize the artificial total.
    phase2_ = false;
    auto st = iterate();
    if (st != LpResult::Status::kOptimal) {
      res.status = st;
      finalize(res);
      return res;
    }
    if (artificial_mass() > opt_.feas_tol) {
      res.status = LpResult::Status::kInfeasible;
      finalize(res);
      return res;
    }
    if (!expel_artificials()) {
      res.status = LpResult::Status::kNumericalTrouble;
      finalize(res);
      return res;
    }
    // Phase 2: real costs, artificials barred from re-entering.
    phase2_ = true;
    refactor();
    st = iterate();
    res.status = st;
    finalize(res);
    return res;
  }

 private:
  bool is_artificial(int id) const { return id >= n_; }

  double basic_cost(int id) const {
    if (phase2_) return is_artificial(id) ? 0.0 : src_.cost(id);
    return is_artificial(id) ? 1.0 : 0.0;
  }

  void init_artificial_basis() {
    basis_.resize(m_);
    art_sign_.resize(m_);
    binv_ = Eigen::MatrixXd::Zero(m_, m_);
    xb_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      art_sign_[i] = (b_(i) >= 0.0) ? 1.0 : -1.0;
      binv_(i, i) = art_sign_[i];
      xb_(i) = std::abs(b_(i));
    }
    iterations_ = 0;
    pivots_since_refactor_ = 0;
  }

  int load_column(int id) {
    if (is_artificial(id)) {
      col_buf_[0] = {id - n_, art_sign_[id - n_]};
      return 1;
    }
    return src_.column(id, col_buf_.data());
  }

  double artificial_mass() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (is_artificial(basis_[i])) s += std::max(0.0, xb_(i));
    }
    return s;
  }

  void refactor() {
    Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      const int nnz = load_column(basis_[i]);
      for (int k = 0; k < nnz; ++k) {
        bm(col_buf_[k].first, i) = col_buf_[k].second;
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(bm);
    binv_ = lu.inverse();
    xb_ = binv_ * b_;
    for (int i = 0; i < m_; ++i) {
      if (xb_(i) < 0.0 && xb_(i) > -1e-7) xb_(i) = 0.0;
    }
    pivots_since_refactor_ = 0;
  }

  LpResult::Status iterate() {
    double best_obj = std::numeric_limits<double>::infinity();
    int stall = 0;
    bool bland = false;
    while (iterations_ < opt_.max_iterations) {
      // y^T = c_B^T B^{-1}
      Eigen::VectorXd cb(m_);
      for (int i = 0; i < m_; ++i) cb(i) = basic_cost(basis_[i]);
      const Eigen::VectorXd y = binv_.transpose() * cb;

      src_.price_all(y.data(), reduced_.data(), phase2_);
      int enter = -1;
      if (!bland) {
        double most_negative = -opt_.cost_tol;
        for (int j = 0; j < n_; ++j) {
          if (reduced_[j] < most_negative) {
            most_negative = reduced_[j];
            enter = j;
          }
        }
      } else {
        for (int j = 0; j < n_; ++j) {
          if (reduced_[j] < -opt_.cost_tol) {
            enter = j;
            break;
          }
        }
      }
      if (enter < 0) return LpResult::Status::kOptimal;

      const int nnz = load_column(enter);
      Eigen::VectorXd d = Eigen::VectorXd::Zero(m_);
      for (int k = 0; k < nnz; ++k) {
        d += col_buf_[k].second * binv_.col(col_buf_[k].first);
      }

      int leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (d(i) > opt_.pivot_tol) {
          const double ratio = std::max(0.0, xb_(i)) / d(i);
          bool better = ratio < theta - 1e-12;
          if (!better && ratio < theta + 1e-12 && leave >= 0) {
            if (bland) {
              better = basis_[i] < basis_[leave];
            } else {
              // prefer expelling artificials, then the larger pivot
              const bool ai = is_artificial(basis_[i]);
              const bool al = is_artificial(basis_[leave]);
              better = (ai && !al) || (ai == al && d(i) > d(leave));
            }
          }
          if (better) {
            theta = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) {
        // Unbounded direction; cannot occur for the robustness programs.
        return LpResult::Status::kNumericalTrouble;
      }

      pivot(enter, leave, d, theta);

      double obj = 0.0;
      for (int i = 0; i < m_; ++i) obj += basic_cost(basis_[i]) * xb_(i);
      if (obj < best_obj - 1e-12) {
        best_obj = obj;
        stall = 0;
        bland = false;
      } else if (++stall > opt_.stall_limit) {
        bland = true;
      }
    }
    return LpResult::Status::kIterationLimit;
  }

  void pivot(int enter, int leave, const Eigen::VectorXd& d, double theta) {
    xb_ -= theta * d;
    xb_(leave) = theta;
    for (int i = 0; i < m_; ++i) {
      if (i != leave && xb_(i) < 0.0 && xb_(i) > -1e-7) xb_(i) = 0.0;
    }
    basis_[leave] = enter;
    const double piv = d(leave);
    binv_.row(leave) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i != leave && d(i) != 0.0) {
        binv_.row(i) -= d(i) * binv_.row(leave);
      }
    }
    ++iterations_;
    if (++pivots_since_refactor_ >= opt_.refactor_interval) refactor();
  }

  // Degenerate basic artificials after phase 1 are swapped for any structural
  // column with a usable pivot in that row.
  bool expel_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      if (xb_(r) > opt_.feas_tol) return false;
      const Eigen::VectorXd row = binv_.row(r);
      int found = -1;
      for (int j = 0; j < n_ && found < 0; ++j) {
        const int nnz = load_column(j);
        double v = 0.0;
        for (int k = 0; k < nnz; ++k) {
          v += row(col_buf_[k].first) * col_buf_[k].second;
        }
        if (std::abs(v) > 1e-7) {
          bool basic = false;
          for (int i = 0; i < m_; ++i) {
            if (basis_[i] == j) {
              basic = true;
              break;
            }
          }
          if (!basic) found = j;
        }
      }
      if (found < 0) return false;  // dependent row
      const int nnz = load_column(found);
      Eigen::VectorXd d = Eigen::VectorXd::Zero(m_);
      for (int k = 0; k < nnz; ++k) {
        d += col_buf_[k].second * binv_.col(col_buf_[k].first);
      }
      pivot(found, r, d, 0.0);
    }
    return true;
  }

  void finalize(LpResult& res) {
    res.iterations = iterations_;
    res.objective = 0.0;
    res.solution.clear();
    {
      Eigen::VectorXd cb(m_);
      const bool saved = phase2_;
      phase2_ = true;
      for (int i = 0; i < m_; ++i) cb(i) = basic_cost(basis_[i]);
      phase2_ = saved;
      const Eigen::VectorXd y = binv_.transpose() * cb;
      res.duals.assign(y.data(), y.data() + m_);
    }
    Eigen::VectorXd ax = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) {
      const int id = basis_[i];
      const double v = xb_(i);
      const int nnz = load_column(id);
      for (int k = 0; k < nnz; ++k) {
        ax(col_buf_[k].first) += v * col_buf_[k].second;
      }
      if (!is_artificial(id)) {
        res.objective += src_.cost(id) * v;
        if (std::abs(v) > 1e-12) res.solution.emplace_back(id, v);
      }
    }
    res.residual = (ax - b_).cwiseAbs().maxCoeff();
    std::sort(res.solution.begin(), res.solution.end());
  }

  const LpColumnSource& src_;
  const LpOptions opt_;
  const int m_, n_;
  Eigen::VectorXd b_;
  bool phase2_ = false;

  std::vector<int> basis_;
  std::vector<double> art_sign_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  std::vector<std::pair<int, double>> col_buf_;
  std::vector<double> reduced_;
  int iterations_ = 0;
  int pivots_since_refactor_ = 0;
};

}  // namespace

LpResult solve_equality_lp(const LpColumnSource& source,
                           const std::vector<double>& b,
                           const LpOptions& options) {
  RevisedSimplex solver(source, b, options);
  return solver.run();
}

}  // namespace msd
