#include "msd/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace msd {

namespace {

void check_register_size(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::length_error("register size " + std::to_string(n_qubits) +
                            " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
}

}  // namespace

QubitRegisterState::QubitRegisterState(int n_qubits, Vec amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  check_register_size(n_qubits_);
  if (amps_.size() != dim_of(n_qubits_)) {
    throw std::invalid_argument("amplitude vector length != 2^n");
  }
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw std::invalid_argument("state norm deviates from 1 by " +
                                std::to_string(std::abs(norm - 1.0)));
  }
}

QubitRegisterState QubitRegisterState::basis_state(int n_qubits,
                                                   uint32_t index) {
  Vec v = Vec::Zero(dim_of(n_qubits));
  v(index) = 1.0;
  return QubitRegisterState(n_qubits, std::move(v));
}

DensityOperator::DensityOperator(int n_qubits, Mat matrix)
    : n_qubits_(n_qubits), mat_(std::move(matrix)) {
  check_register_size(n_qubits_);
  const int d = dim_of(n_qubits_);
  if (mat_.rows() != d || mat_.cols() != d) {
    throw std::invalid_argument("density matrix dimension != 2^n x 2^n");
  }
  const double herm_err = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kHermitianTol) {
    throw std::invalid_argument("matrix not Hermitian, max deviation " +
                                std::to_string(herm_err));
  }
  const double trace_err = std::abs(mat_.trace() - cxd(1.0, 0.0));
  if (trace_err > kTraceTol) {
    throw std::invalid_argument("trace deviates from 1 by " +
                                std::to_string(trace_err));
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenvalueFloor) {
    throw std::invalid_argument("matrix not positive semidefinite, min "
                                "eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityOperator DensityOperator::pure(const QubitRegisterState& psi) {
  const Vec& a = psi.amplitudes();
  return DensityOperator(psi.n_qubits(), a * a.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(int n_qubits) {
  const int d = dim_of(n_qubits);
  return DensityOperator(n_qubits,
                         Mat::Identity(d, d) / static_cast<double>(d));
}

SubsystemIndex::SubsystemIndex(std::initializer_list<int> qs)
    : SubsystemIndex(std::vector<int>(qs)) {}

SubsystemIndex::SubsystemIndex(std::vector<int> qs) : qubits(std::move(qs)) {
  if (qubits.empty()) {
    throw std::invalid_argument("subsystem index must be non-empty");
  }
  for (size_t i = 1; i < qubits.size(); ++i) {
    if (qubits[i] <= qubits[i - 1]) {
      throw std::invalid_argument("subsystem qubits must strictly increase");
    }
  }
  if (qubits.front() < 0) {
    throw std::invalid_argument("negative qubit position");
  }
}

void SubsystemIndex::validate_within(int n_qubits) const {
  if (qubits.back() >= n_qubits) {
    throw std::out_of_range("subsystem qubit " +
                            std::to_string(qubits.back()) +
                            " outside register of size " +
                            std::to_string(n_qubits));
  }
}

QubitRegisterState tensor_product(const QubitRegisterState& a,
                                  const QubitRegisterState& b) {
  const int n = a.n_qubits() + b.n_qubits();
  check_register_size(n);
  Vec out(dim_of(n));
  const int db = b.dim();
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < db; ++j) {
      out(i * db + j) = a.amplitude(i) * b.amplitude(j);
    }
  }
  return QubitRegisterState(n, std::move(out));
}

DensityOperator tensor_product(const DensityOperator& a,
                               const DensityOperator& b) {
  const int n = a.n_qubits() + b.n_qubits();
  check_register_size(n);
  const int da = a.dim(), db = b.dim();
  Mat out(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return DensityOperator(n, std::move(out));
}

DensityOperator tensor_power(const DensityOperator& rho, int copies) {
  if (copies < 1) throw std::invalid_argument("tensor_power needs copies >= 1");
  check_register_size(rho.n_qubits() * copies);
  Mat acc = rho.matrix();
  int d = rho.dim();
  const int dr = rho.dim();
  for (int c = 1; c < copies; ++c) {
    Mat next(d * dr, d * dr);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        next.block(i * dr, j * dr, dr, dr) = acc(i, j) * rho.matrix();
      }
    }
    acc.swap(next);
    d *= dr;
  }
  return DensityOperator(rho.n_qubits() * copies, std::move(acc));
}

DensityOperator partial_trace(const DensityOperator& rho,
                              const SubsystemIndex& keep) {
  const int n = rho.n_qubits();
  keep.validate_within(n);
  const int k = keep.size();
  std::vector<int> others;
  for (int q = 0, j = 0; q < n; ++q) {
    if (j < k && keep.qubits[j] == q) {
      ++j;
    } else {
      others.push_back(q);
    }
  }
  const int ne = static_cast<int>(others.size());
  // Basis bit of qubit q is (n-1-q); build full indices by bit deposit.
  auto deposit = [n](const std::vector<int>& qs, int bits) {
    uint32_t out = 0;
    for (size_t j = 0; j < qs.size(); ++j) {
      const uint32_t bit = (bits >> (qs.size() - 1 - j)) & 1u;
      out |= bit << (n - 1 - qs[j]);
    }
    return out;
  };
  Mat out = Mat::Zero(dim_of(k), dim_of(k));
  for (int r = 0; r < dim_of(k); ++r) {
    const uint32_t rk = deposit(keep.qubits, r);
    for (int c = 0; c < dim_of(k); ++c) {
      const uint32_t ck = deposit(keep.qubits, c);
      cxd sum = 0.0;
      for (int e = 0; e < (1 << ne); ++e) {
        const uint32_t env = deposit(others, e);
        sum += rho.matrix()(rk | env, ck | env);
      }
      out(r, c) = sum;
    }
  }
  return DensityOperator(k, std::move(out));
}

double fidelity_with_pure(const DensityOperator& rho,
                          const QubitRegisterState& psi) {
  if (rho.n_qubits() != psi.n_qubits()) {
    throw std::invalid_argument("fidelity_with_pure: dimension mismatch");
  }
  return std::real(psi.amplitudes().dot(rho.matrix() * psi.amplitudes()));
}

double von_neumann_entropy(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > kEntropyClip) s -= lam * std::log(lam);
  }
  return s;
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(a.matrix() - b.matrix(),
                                        Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace msd
