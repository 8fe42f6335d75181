#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "msd/distillation.hpp"
#include "msd/magic.hpp"
#include "msd/state_factory.hpp"

namespace msd {

inline constexpr const char* kArtifactVersion = "msdlab 1.0.0";
inline constexpr int kManifestSchemaVersion = 1;

// Shared services for a run: engine, dictionaries, worker count, output dir.
struct RunContext {
  std::filesystem::path out_dir;
  std::filesystem::path cache_dir = "dict_cache";
  int threads = 2;

  RunContext(std::filesystem::path out, std::filesystem::path cache,
             int n_threads)
      : out_dir(std::move(out)),
        cache_dir(std::move(cache)),
        threads(n_threads),
        dicts(cache_dir) {}

  DistillationEngine engine;
  DictionarySet dicts;
};

// Deterministic worker pool: items are indexed, outputs land in slot order,
// so thread count never changes emitted bytes.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

struct TableInfo {
  std::string file;
  int rows;
};

struct RunSummary {
  std::vector<TableInfo> tables;
  nlohmann::json extras;
};

// ---- experiment configs (CLI flags and --config JSON mirror these) ----

struct ThresholdConfig {
  std::vector<double> epsilon_grid;  // default 0..0.5 step 0.01
  nlohmann::json to_json() const;
  static ThresholdConfig from_json(const nlohmann::json& j);
};

struct FamilySweepConfig {
  StateFamilySpec::Family family = StateFamilySpec::Family::kPhaseGhz;
  std::vector<double> alpha_sq_grid;  // default 0..1, 11 points
  double phi = M_PI / 4;
  std::vector<CompositeSpec::Block> blocks;  // composite only
  int zero_pad = 0;
  int rounds = 10;
  bool magic_profiles = true;
  int profile_max_k = 4;
  nlohmann::json to_json() const;
  static FamilySweepConfig from_json(const nlohmann::json& j);
};

struct SqueezeConfig {
  enum class Protocol { kOneAxis, kTwoAxis };
  Protocol protocol = Protocol::kOneAxis;
  StateFamilySpec::Family family = StateFamilySpec::Family::kMisaligned;
  double theta_bar = M_PI / 4;   // misaligned family
  double theta_max = 0.05;
  std::optional<double> beta_bar;  // mixed near-T family; default theta_T
  double beta_max = 0.05;
  double p_max = 0.1;
  std::optional<double> p_bar;     // default 1 - p_max
  std::optional<double> mixed_phi;  // default pi/4
  std::vector<double> t_grid;   // default 0..pi, 21 points
  int samples = 100;
  double target_fidelity = 0.97;
  int max_rounds = 15;
  bool magic_summaries = true;
  uint64_t seed = 0;
  nlohmann::json to_json() const;
  static SqueezeConfig from_json(const nlohmann::json& j);
};

struct RandomStudyConfig {
  int samples = 100;
  double lambda_min = 0.16;
  std::optional<double> fidelity_min;  // default 1 - threshold()
  double cost_target = 0.999;
  int max_rounds = 15;
  int max_lrom_k = 4;
  bool lrom5 = false;  // column-generation mode, expensive
  int max_attempts_per_sample = 100000;
  uint64_t seed = 0;
  nlohmann::json to_json() const;
  static RandomStudyConfig from_json(const nlohmann::json& j);
};

struct RomReportConfig {
  std::optional<StateFamilySpec> family;
  std::optional<std::filesystem::path> state_file;  // amplitude CSV
  int max_k = 4;
  bool nonlocal_pairs = true;
  std::optional<std::filesystem::path> dump_state;
  nlohmann::json to_json() const;
  static RomReportConfig from_json(const nlohmann::json& j);
};

// ---- runners; each writes its tables plus manifest.json under out_dir ----

RunSummary run_threshold_curve(const ThresholdConfig& cfg, RunContext& ctx);
RunSummary run_family_sweep(const FamilySweepConfig& cfg, RunContext& ctx);
RunSummary run_squeeze_study(const SqueezeConfig& cfg, RunContext& ctx);
RunSummary run_random_state_study(const RandomStudyConfig& cfg,
                                  RunContext& ctx);
RunSummary run_rom_report(const RomReportConfig& cfg, RunContext& ctx);

// Manifest written atomically after all tables; echoes the config, records
// dictionary-cache checksums and per-table row counts.
void write_manifest(const RunContext& ctx, const std::string& experiment_id,
                    const nlohmann::json& config_echo, uint64_t seed,
                    const RunSummary& summary,
                    const std::string& started_utc);

std::string utc_timestamp();

std::vector<double> linspace(double lo, double hi, int points);

}  // namespace msd
