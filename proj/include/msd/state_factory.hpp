#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "msd/distillation.hpp"
#include "msd/states.hpp"

namespace msd {

// ---- parametrized input families ----

struct PhaseGhzSpec {
  int n = 5;
  double alpha = M_SQRT1_2;  // beta = sqrt(1 - alpha^2)
  double phi = M_PI / 4;
};

struct GhzTSpec {
  int n = 5;
  double alpha = M_SQRT1_2;
  double phi = M_PI / 4;
};

struct CompositeSpec {
  enum class BlockFamily { kPhaseGhz, kGhzT };
  struct Block {
    BlockFamily family;
    int size;
    double alpha;
    double phi;
  };
  std::vector<Block> blocks;
  int zero_pad = 0;  // trailing |0> qubits; sizes + pad must total 5
};

struct MisalignedSpinSpec {
  double theta_bar = M_PI / 4;
  double theta_max = 0.05;
  uint64_t seed = 0;
};

struct MixedNearTSpec {
  double beta_bar;   // defaults to theta_T, set by the constructor helpers
  double beta_max = 0.0;
  double p_bar = 1.0;
  double p_max = 0.0;
  double phi = M_PI / 4;
  uint64_t seed = 0;
};

// alpha|0...0> + e^{i phi} beta|1...1>
QubitRegisterState phase_ghz(const PhaseGhzSpec& spec);

// alpha|T0>^n + e^{i phi} beta|T1>^n (orthogonal branches, already normalized)
QubitRegisterState ghz_t(const GhzTSpec& spec);

QubitRegisterState composite(const CompositeSpec& spec);

// Product of cos(theta_i)|0> + sin(theta_i)|1> spins with seeded uniform
// misalignment theta_i in [theta_bar +- theta_max].
QubitRegisterState misaligned_product(const MisalignedSpinSpec& spec);

// Product of p_i |tau0><tau0| + (1-p_i)|tau1><tau1| mixtures around the T
// angle; beta_i and p_i drawn uniformly from their intervals.
DensityOperator mixed_near_t(const MixedNearTSpec& spec);

MixedNearTSpec near_t_defaults();

// ---- collective spin / squeezing ----

struct CollectiveSpinOps {
  Mat sx, sy, sz;            // 32x32 collective spin components
  Mat s_plus, s_minus;
  Mat symmetric_projector;   // rank-6 projector onto the S=5/2 Dicke span
  std::vector<Vec> dicke;    // |S=5/2, S_z=5/2-k>, k = 0..5
};

const CollectiveSpinOps& collective_spin_ops();

// exp(-i t S_z^2) on the symmetric subspace, identity on its complement.
Mat one_axis_twist(double t);

// exp(-i t (S+^2 - S-^2)/(2i)) on the symmetric subspace, identity elsewhere.
Mat two_axis_countertwist(double t);

QubitRegisterState apply_unitary(const Mat& u, const QubitRegisterState& psi);
DensityOperator apply_unitary(const Mat& u, const DensityOperator& rho);

// ---- samplers ----

QubitRegisterState haar_random_pure(int n_qubits, uint64_t seed);

struct SampleStats {
  int attempts = 0;
  int accepted = 0;
  double acceptance_rate() const {
    return attempts > 0 ? static_cast<double>(accepted) / attempts : 0.0;
  }
};

struct DistillableSampleOptions {
  double lambda_min = 0.16;
  double fidelity_min = -1.0;  // < 0 means 1 - threshold(), resolved by caller
  int max_attempts = 100000;
};

// Rejection-samples Haar states until sqrt(Tr(P rho)) > lambda_min and the
// round-1 output T-fidelity exceeds fidelity_min.
std::pair<QubitRegisterState, SampleStats> sample_distillable(
    const DistillationEngine& engine, const DistillableSampleOptions& options,
    uint64_t seed);

// ---- serializable family tag for configs and sweeps ----

struct StateFamilySpec {
  enum class Family {
    kPhaseGhz,
    kGhzT,
    kComposite,
    kProduct,      // (1-eps)T0 + eps T1 per qubit, five copies
    kMisaligned,
    kMixedNearT,
  };
  Family family = Family::kPhaseGhz;
  int n = 5;
  double alpha = M_SQRT1_2;
  double phi = M_PI / 4;
  double epsilon = 0.0;
  std::vector<CompositeSpec::Block> blocks;
  int zero_pad = 0;
  MisalignedSpinSpec misaligned;
  MixedNearTSpec mixed = near_t_defaults();
  uint64_t seed = 0;

  DensityOperator realize() const;
  // Amplitude-level construction; throws for the mixed families.
  QubitRegisterState realize_pure() const;

  nlohmann::json to_json() const;
  static StateFamilySpec from_json(const nlohmann::json& j);
  static Family family_from_name(const std::string& name);
  static std::string family_name(Family f);
};

// Amplitude CSV: header "basis_index,real,imag", one row per amplitude.
void write_amplitudes_csv(const QubitRegisterState& psi,
                          const std::filesystem::path& file);
QubitRegisterState read_amplitudes_csv(const std::filesystem::path& file);

}  // namespace msd
