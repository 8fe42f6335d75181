#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "msd/simplex.hpp"
#include "msd/stabilizer_dictionary.hpp"
#include "msd/states.hpp"

namespace msd {

enum class SolverStatus { kOptimal, kInfeasible, kToleranceWarning };

struct RomResult {
  double rom = 1.0;
  double lrom = 0.0;  // natural log of rom
  // (dictionary column index, signed weight) with |weight| > 1e-12
  std::vector<std::pair<int, double>> coefficients;
  SolverStatus solver_status = SolverStatus::kOptimal;
  int lp_iterations = 0;
  double reconstruction_residual = 0.0;
};

// min sum|x| s.t. sum x_i s_i = rho over the stabilizer dictionary.
RomResult rom(const DensityOperator& rho, const StabilizerDictionary& dict);

// Dictionaries for every size up to 4, built or cache-loaded on demand.
class DictionarySet {
 public:
  explicit DictionarySet(std::filesystem::path cache_dir);
  const StabilizerDictionary& get(int n_qubits) const;
  std::map<int, uint64_t> checksums() const;  // sizes touched so far

 private:
  std::filesystem::path cache_dir_;
  mutable std::map<int, StabilizerDictionary> dicts_;
  mutable std::mutex mu_;
};

// ln rom of the reduced state on `subsystem`.
double lrom_subsystem(const DensityOperator& state,
                      const SubsystemIndex& subsystem,
                      const DictionarySet& dicts);

struct MagicProfile {
  struct Row {
    std::vector<int> subsystem;
    int k;
    double lrom;
  };
  std::vector<Row> rows;
  std::map<int, double> mean_by_k;
  std::map<int, double> max_by_k;
};

// lrom of every subsystem of size <= max_k (all of them, or the given sample).
MagicProfile magic_profile(const DensityOperator& state, int max_k,
                           const DictionarySet& dicts,
                           const std::vector<SubsystemIndex>* sample = nullptr);

nlohmann::json to_json(const MagicProfile& profile);

// lrom(rho_AB) - lrom(rho_A) - lrom(rho_B); the magic held in correlations.
double nonlocal_magic(const DensityOperator& state, const SubsystemIndex& a,
                      const SubsystemIndex& b, const DictionarySet& dicts);

// Max squared overlap with the 8-state Clifford orbit of |T0>. Closed form
// (1 + |r|_1/sqrt(3))/2; t_fidelity_orbit_max enumerates the orbit instead.
double t_fidelity(const DensityOperator& single_qubit);
double t_fidelity_orbit_max(const DensityOperator& single_qubit);

// Exact octahedron value max(1, |r|_1) for one qubit; the analytic oracle the
// LP is held to.
double single_qubit_rom_analytic(const DensityOperator& single_qubit);

// Optional exact 5-qubit robustness via column generation over the streamed
// 2,423,520-state dictionary. Expensive; not part of any default path.
RomResult rom5_column_generation(const DensityOperator& rho,
                                 int max_outer_rounds = 200);

}  // namespace msd
