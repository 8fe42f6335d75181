#include "msd/magic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "msd/clifford.hpp"
#include "msd/pauli.hpp"

namespace msd {

namespace {

// Split-variable view of the dictionary: column j < D is +s_j, column D + j
// is -s_j, all costs 1. The identity row pins sum(x+ - x-) = 1.
class RomColumns final : public LpColumnSource {
 public:
  explicit RomColumns(const StabilizerDictionary& dict) : dict_(dict) {}

  int num_rows() const override { return 1 << (2 * dict_.n_qubits()); }
  int num_columns() const override { return 2 * dict_.column_count(); }

  int column(int j, std::pair<int, double>* out) const override {
    const int d = dict_.column_count();
    const double sgn = (j < d) ? 1.0 : -1.0;
    const auto col = dict_.column(j < d ? j : j - d);
    int k = 0;
    for (const auto& e : col) {
      out[k++] = {e.pauli_index, sgn * e.sign};
    }
    return k;
  }

  double cost(int) const override { return 1.0; }

  void price_all(const double* y, double* reduced,
                 bool include_cost) const override {
    const int d = dict_.column_count();
    const double c = include_cost ? 1.0 : 0.0;
    for (int j = 0; j < d; ++j) {
      double dot = 0.0;
      for (const auto& e : dict_.column(j)) {
        dot += y[e.pauli_index] * e.sign;
      }
      reduced[j] = c - dot;
      reduced[d + j] = c + dot;
    }
  }

 private:
  const StabilizerDictionary& dict_;
};

RomResult rom_from_lp(const LpResult& lp, int dict_columns) {
  RomResult out;
  out.rom = lp.objective;
  out.lrom = std::log(std::max(lp.objective, 1e-300));
  out.lp_iterations = lp.iterations;
  out.reconstruction_residual = lp.residual;
  std::map<int, double> combined;
  for (const auto& [id, v] : lp.solution) {
    combined[id < dict_columns ? id : id - dict_columns] +=
        (id < dict_columns) ? v : -v;
  }
  for (const auto& [id, v] : combined) {
    if (std::abs(v) > 1e-12) out.coefficients.emplace_back(id, v);
  }
  switch (lp.status) {
    case LpResult::Status::kOptimal:
      out.solver_status = (lp.residual <= 1e-6) ? SolverStatus::kOptimal
                                                : SolverStatus::kToleranceWarning;
      break;
    case LpResult::Status::kInfeasible:
      out.solver_status = SolverStatus::kInfeasible;
      break;
    default:
      out.solver_status = SolverStatus::kToleranceWarning;
      break;
  }
  return out;
}

}  // namespace

RomResult rom(const DensityOperator& rho, const StabilizerDictionary& dict) {
  if (rho.n_qubits() != dict.n_qubits()) {
    throw std::invalid_argument("rom: dictionary size != state size");
  }
  const Eigen::VectorXd c = pauli_expectation_vector(rho);
  RomColumns cols(dict);
  const LpResult lp = solve_equality_lp(
      cols, std::vector<double>(c.data(), c.data() + c.size()));
  if (lp.status == LpResult::Status::kInfeasible) {
    // The dictionary spans every Hermitian unit-trace operator, so this
    // signals an invalid input rather than a genuine infeasibility.
    throw std::runtime_error("rom LP reported infeasible on a valid state");
  }
  return rom_from_lp(lp, dict.column_count());
}

DictionarySet::DictionarySet(std::filesystem::path cache_dir)
    : cache_dir_(std::move(cache_dir)) {}

const StabilizerDictionary& DictionarySet::get(int n_qubits) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = dicts_.find(n_qubits);
  if (it == dicts_.end()) {
    it = dicts_
             .emplace(n_qubits,
                      StabilizerDictionary::load_or_build(n_qubits, cache_dir_))
             .first;
  }
  return it->second;
}

std::map<int, uint64_t> DictionarySet::checksums() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::map<int, uint64_t> out;
  for (const auto& [n, d] : dicts_) out[n] = d.checksum();
  return out;
}

double lrom_subsystem(const DensityOperator& state,
                      const SubsystemIndex& subsystem,
                      const DictionarySet& dicts) {
  if (subsystem.size() > StabilizerDictionary::kMaxEnumerationQubits) {
    throw std::invalid_argument("lrom_subsystem limited to 4 qubits");
  }
  const DensityOperator red = (subsystem.size() == state.n_qubits())
                                  ? state
                                  : partial_trace(state, subsystem);
  return rom(red, dicts.get(subsystem.size())).lrom;
}

MagicProfile magic_profile(const DensityOperator& state, int max_k,
                           const DictionarySet& dicts,
                           const std::vector<SubsystemIndex>* sample) {
  if (max_k > StabilizerDictionary::kMaxEnumerationQubits) {
    throw std::invalid_argument("magic_profile limited to k <= 4");
  }
  std::vector<SubsystemIndex> subsystems;
  if (sample != nullptr) {
    subsystems = *sample;
  } else {
    const int n = state.n_qubits();
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) > max_k) continue;
      std::vector<int> qs;
      for (int q = 0; q < n; ++q) {
        if ((mask >> q) & 1u) qs.push_back(q);
      }
      if (static_cast<int>(qs.size()) == n) continue;  // proper subsystems only
      subsystems.emplace_back(std::move(qs));
    }
  }
  MagicProfile profile;
  std::map<int, int> count_by_k;
  for (const auto& sub : subsystems) {
    const double l = lrom_subsystem(state, sub, dicts);
    profile.rows.push_back({sub.qubits, sub.size(), l});
    profile.mean_by_k[sub.size()] += l;
    ++count_by_k[sub.size()];
    auto it = profile.max_by_k.find(sub.size());
    if (it == profile.max_by_k.end() || l > it->second) {
      profile.max_by_k[sub.size()] = l;
    }
  }
  for (auto& [k, v] : profile.mean_by_k) v /= count_by_k[k];
  return profile;
}

nlohmann::json to_json(const MagicProfile& profile) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : profile.rows) {
    rows.push_back({{"subsystem", r.subsystem}, {"k", r.k}, {"lrom", r.lrom}});
  }
  nlohmann::json aggregates;
  for (const auto& [k, v] : profile.mean_by_k) {
    aggregates[std::to_string(k)] = {{"mean", v},
                                     {"max", profile.max_by_k.at(k)}};
  }
  return {{"subsystems", rows}, {"aggregates", aggregates}};
}

double nonlocal_magic(const DensityOperator& state, const SubsystemIndex& a,
                      const SubsystemIndex& b, const DictionarySet& dicts) {
  std::vector<int> joint;
  for (int q : a.qubits) joint.push_back(q);
  for (int q : b.qubits) joint.push_back(q);
  std::sort(joint.begin(), joint.end());
  if (std::adjacent_find(joint.begin(), joint.end()) != joint.end()) {
    throw std::invalid_argument("nonlocal_magic: overlapping subsystems");
  }
  const SubsystemIndex ab{std::move(joint)};
  return lrom_subsystem(state, ab, dicts) - lrom_subsystem(state, a, dicts) -
         lrom_subsystem(state, b, dicts);
}

double t_fidelity(const DensityOperator& rho) {
  if (rho.n_qubits() != 1) {
    throw std::invalid_argument("t_fidelity expects a single qubit");
  }
  const Eigen::Vector3d r = bloch_vector(rho.matrix());
  return 0.5 * (1.0 + (std::abs(r(0)) + std::abs(r(1)) + std::abs(r(2))) /
                          std::sqrt(3.0));
}

double t_fidelity_orbit_max(const DensityOperator& rho) {
  if (rho.n_qubits() != 1) {
    throw std::invalid_argument("t_fidelity expects a single qubit");
  }
  // The 8 T states have Bloch vectors (+-1,+-1,+-1)/sqrt(3);
  // F = <T|rho|T> = (1 + r.t)/2.
  const Eigen::Vector3d r = bloch_vector(rho.matrix());
  double best = 0.0;
  for (int s = 0; s < 8; ++s) {
    Eigen::Vector3d t((s & 1) ? -1.0 : 1.0, (s & 2) ? -1.0 : 1.0,
                      (s & 4) ? -1.0 : 1.0);
    t /= std::sqrt(3.0);
    best = std::max(best, 0.5 * (1.0 + r.dot(t)));
  }
  return best;
}

double single_qubit_rom_analytic(const DensityOperator& rho) {
  if (rho.n_qubits() != 1) {
    throw std::invalid_argument("single_qubit_rom_analytic expects one qubit");
  }
  const Eigen::Vector3d r = bloch_vector(rho.matrix());
  return std::max(1.0, std::abs(r(0)) + std::abs(r(1)) + std::abs(r(2)));
}

namespace {

// Restricted-master LP over an explicit working set of 5-qubit columns.
class WorkingSetColumns final : public LpColumnSource {
 public:
  WorkingSetColumns(int n_qubits, std::vector<std::vector<DictEntry>> cols)
      : n_(n_qubits), cols_(std::move(cols)) {}

  int num_rows() const override { return 1 << (2 * n_); }
  int num_columns() const override { return 2 * static_cast<int>(cols_.size()); }

  int column(int j, std::pair<int, double>* out) const override {
    const int d = static_cast<int>(cols_.size());
    const double sgn = (j < d) ? 1.0 : -1.0;
    const auto& col = cols_[j < d ? j : j - d];
    int k = 0;
    for (const auto& e : col) out[k++] = {e.pauli_index, sgn * e.sign};
    return k;
  }

  double cost(int) const override { return 1.0; }

  void price_all(const double* y, double* reduced,
                 bool include_cost) const override {
    const int d = static_cast<int>(cols_.size());
    const double c = include_cost ? 1.0 : 0.0;
    for (int j = 0; j < d; ++j) {
      double dot = 0.0;
      for (const auto& e : cols_[j]) dot += y[e.pauli_index] * e.sign;
      reduced[j] = c - dot;
      reduced[d + j] = c + dot;
    }
  }

  const std::vector<std::vector<DictEntry>>& columns() const { return cols_; }
  void add(std::vector<DictEntry> col) { cols_.push_back(std::move(col)); }

 private:
  int n_;
  std::vector<std::vector<DictEntry>> cols_;
};

}  // namespace

RomResult rom5_column_generation(const DensityOperator& rho,
                                 int max_outer_rounds) {
  if (rho.n_qubits() != 5) {
    throw std::invalid_argument("rom5_column_generation expects 5 qubits");
  }
  const Eigen::VectorXd c = pauli_expectation_vector(rho);
  const std::vector<double> b(c.data(), c.data() + c.size());

  // Seed: all single-qubit product stabilizer states (6^5 columns). They span
  // the full operator space, so the restricted master is always feasible.
  const auto sub1 = enumerate_stabilizer_subspaces(1);
  std::vector<std::vector<DictEntry>> product_cols;
  {
    std::vector<std::vector<DictEntry>> one_qubit;  // 6 columns on 1 qubit
    for (const auto& s : sub1) {
      for (uint32_t signs = 0; signs < 2; ++signs) {
        std::vector<DictEntry> col(2);
        for (int e = 0; e < 2; ++e) {
          const auto& el = s.elements[e];
          const int neg =
              el.intrinsic_neg ^ (std::popcount(el.subset & signs) & 1);
          col[e] = {el.pauli_index, static_cast<int8_t>(neg ? -1 : 1)};
        }
        one_qubit.push_back(std::move(col));
      }
    }
    std::vector<std::vector<DictEntry>> acc = {{DictEntry{0, 1}}};
    for (int q = 0; q < 5; ++q) {
      std::vector<std::vector<DictEntry>> next;
      next.reserve(acc.size() * one_qubit.size());
      for (const auto& base : acc) {
        for (const auto& oc : one_qubit) {
          std::vector<DictEntry> merged;
          merged.reserve(base.size() * 2);
          for (const auto& be : base) {
            for (const auto& oe : oc) {
              merged.push_back(
                  {static_cast<uint16_t>(be.pauli_index * 4 + oe.pauli_index),
                   static_cast<int8_t>(be.sign * oe.sign)});
            }
          }
          next.push_back(std::move(merged));
        }
      }
      acc.swap(next);
    }
    for (auto& col : acc) {
      std::sort(col.begin(), col.end(), [](const auto& a, const auto& b2) {
        return a.pauli_index < b2.pauli_index;
      });
      product_cols.push_back(std::move(col));
    }
  }

  WorkingSetColumns master(5, std::move(product_cols));
  LpOptions opt;
  opt.max_iterations = 400000;
  const auto subspaces = enumerate_stabilizer_subspaces(5);
  const int group = 32;
  LpResult lp;
  bool converged = false;
  for (int round = 0; round < max_outer_rounds; ++round) {
    lp = solve_equality_lp(master, b, opt);
    if (lp.status != LpResult::Status::kOptimal) break;
    // Price every stabilizer state against the duals; a state is violated
    // when |y . s| > 1. dot(S) over the 2^5 sign choices of one subspace is a
    // Walsh transform of the signed element duals over generator subsets.
    struct Candidate {
      double violation;
      int subspace;
      int signs;
    };
    std::vector<Candidate> cands;
    double w[32];
    for (size_t si = 0; si < subspaces.size(); ++si) {
      const auto& sub = subspaces[si];
      for (int e = 0; e < group; ++e) {
        const auto& el = sub.elements[e];
        w[el.subset] =
            el.intrinsic_neg ? -lp.duals[el.pauli_index] : lp.duals[el.pauli_index];
      }
      for (int len = 1; len < group; len <<= 1) {
        for (int base = 0; base < group; base += len << 1) {
          for (int k = base; k < base + len; ++k) {
            const double a = w[k], c2 = w[k + len];
            w[k] = a + c2;
            w[k + len] = a - c2;
          }
        }
      }
      for (int signs = 0; signs < group; ++signs) {
        const double v = std::abs(w[signs]) - 1.0;
        if (v > 1e-7) cands.push_back({v, static_cast<int>(si), signs});
      }
    }
    if (cands.empty()) {
      converged = true;  // optimal over the full dictionary
      break;
    }
    const size_t take = std::min<size_t>(cands.size(), 256);
    std::partial_sort(cands.begin(), cands.begin() + take, cands.end(),
                      [](const Candidate& a, const Candidate& b2) {
                        return a.violation > b2.violation;
                      });
    for (size_t i = 0; i < take; ++i) {
      const auto& sub = subspaces[cands[i].subspace];
      std::vector<DictEntry> col(group);
      for (int e = 0; e < group; ++e) {
        const auto& el = sub.elements[e];
        const int neg = el.intrinsic_neg ^
                        (std::popcount(static_cast<uint32_t>(
                             el.subset & cands[i].signs)) &
                         1);
        col[e] = {el.pauli_index, static_cast<int8_t>(neg ? -1 : 1)};
      }
      master.add(std::move(col));
    }
  }
  RomResult out = rom_from_lp(lp, static_cast<int>(master.columns().size()));
  if (!converged && out.solver_status == SolverStatus::kOptimal) {
    out.solver_status = SolverStatus::kToleranceWarning;
  }
  return out;
}

}  // namespace msd
