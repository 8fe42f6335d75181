// msdlab: config-driven experiment runner for the five-qubit magic state
// distillation laboratory. One subcommand per experiment; every run writes
// plot-ready CSV tables plus a manifest.json into the output directory.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "msd/experiments.hpp"

namespace {

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MSDLAB_OUT_DIR")) return env;
  return "out";
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  nlohmann::json j;
  is >> j;
  return j;
}

// Flags fill the config first; --config keys override them.
template <typename Config>
Config merge_config(const Config& from_flags, const std::string& config_path) {
  if (config_path.empty()) return from_flags;
  nlohmann::json j = from_flags.to_json();
  const nlohmann::json overrides = load_config_file(config_path);
  for (const auto& [key, value] : overrides.items()) j[key] = value;
  return Config::from_json(j);
}

void report(const msd::RunSummary& summary,
            const std::filesystem::path& out_dir) {
  for (const auto& t : summary.tables) {
    std::cout << "wrote " << (out_dir / t.file).string() << " (" << t.rows
              << " rows)\n";
  }
  std::cout << "wrote " << (out_dir / "manifest.json").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"five-qubit magic state distillation laboratory"};
  app.require_subcommand(1);

  std::string out_flag, cache_dir = "dict_cache", config_path;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  app.add_option("--out", out_flag,
                 "output directory (default $MSDLAB_OUT_DIR or ./out)");
  app.add_option("--cache-dir", cache_dir,
                 "stabilizer dictionary cache directory");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--config", config_path,
                 "JSON config file; keys override command-line flags");

  // threshold
  auto* threshold = app.add_subcommand(
      "threshold", "output-vs-input fidelity curve and the crossover point");
  double eps_lo = 0.0, eps_hi = 0.5;
  int eps_points = 51;
  threshold->add_option("--eps-min", eps_lo, "grid start");
  threshold->add_option("--eps-max", eps_hi, "grid end");
  threshold->add_option("--eps-points", eps_points, "grid size");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "round-by-round fidelities and subsystem magic for a family");
  std::string sweep_family = "pg";
  double sweep_phi = M_PI / 4;
  int sweep_rounds = 10, sweep_points = 11, profile_max_k = 4;
  bool no_profiles = false;
  std::string blocks_arg;
  int zero_pad = 0;
  sweep->add_option("--family", sweep_family,
                    "pg | gt | composite | product");
  sweep->add_option("--phi", sweep_phi, "relative phase");
  sweep->add_option("--rounds", sweep_rounds, "distillation rounds");
  sweep->add_option("--points", sweep_points, "alpha^2 grid size");
  sweep->add_option("--profile-max-k", profile_max_k,
                    "largest subsystem in the magic profile");
  sweep->add_flag("--no-profiles", no_profiles, "skip subsystem magic");
  sweep->add_option("--blocks", blocks_arg,
                    "composite blocks, e.g. pg2+pg3 or gt2+gt2");
  sweep->add_option("--zero-pad", zero_pad, "trailing |0> qubits (composite)");

  // squeeze
  auto* squeeze = app.add_subcommand(
      "squeeze", "distillability of squeezed spin inputs over a t grid");
  std::string protocol = "one_axis", squeeze_family = "misaligned";
  double theta_bar = M_PI / 4, theta_max = 0.05;
  double beta_max = 0.05, p_max = 0.1;
  double t_lo = 0.0, t_hi = M_PI;
  int t_points = 21, squeeze_samples = 100;
  double squeeze_target = 0.97;
  uint64_t squeeze_seed = 0;
  bool squeeze_seed_set = false;
  squeeze->add_option("--protocol", protocol, "one_axis | two_axis");
  squeeze->add_option("--family", squeeze_family, "misaligned | mixed_near_t");
  squeeze->add_option("--theta-bar", theta_bar, "mean spin angle");
  squeeze->add_option("--theta-max", theta_max, "misalignment half-width");
  squeeze->add_option("--beta-max", beta_max, "near-T angle half-width");
  squeeze->add_option("--p-max", p_max, "near-T probability half-width");
  squeeze->add_option("--t-min", t_lo, "squeezing time grid start");
  squeeze->add_option("--t-max", t_hi, "squeezing time grid end");
  squeeze->add_option("--t-points", t_points, "squeezing time grid size");
  squeeze->add_option("--samples", squeeze_samples, "samples per t");
  squeeze->add_option("--target", squeeze_target, "target T-fidelity");
  squeeze
      ->add_option("--seed", squeeze_seed, "master seed (required)")
      ->each([&squeeze_seed_set](const std::string&) {
        squeeze_seed_set = true;
      });

  // sample
  auto* sample = app.add_subcommand(
      "sample", "random distillable states: entanglement and magic profile");
  int sample_count = 100;
  double lambda_min = 0.16, cost_target = 0.999;
  int max_lrom_k = 4;
  bool lrom5 = false;
  uint64_t sample_seed = 0;
  bool sample_seed_set = false;
  sample->add_option("--samples", sample_count, "accepted sample count");
  sample->add_option("--lambda-min", lambda_min, "success amplitude floor");
  sample->add_option("--cost-target", cost_target,
                     "T-fidelity target for the cost column");
  sample->add_option("--max-lrom-k", max_lrom_k, "largest lrom subsystem");
  sample->add_flag("--lrom5", lrom5,
                   "exact 5-qubit robustness via column generation (slow)");
  sample->add_option("--seed", sample_seed, "master seed (required)")
      ->each([&sample_seed_set](const std::string&) {
        sample_seed_set = true;
      });

  // rom
  auto* rom_cmd = app.add_subcommand(
      "rom", "robustness-of-magic report for one state");
  std::string rom_family, rom_state_file, rom_dump_state, rom_blocks;
  double rom_alpha_sq = 0.5, rom_phi = M_PI / 4, rom_epsilon = 0.0;
  int rom_n = 5, rom_max_k = 4, rom_zero_pad = 0;
  uint64_t rom_seed = 0;
  bool rom_no_nlm = false;
  rom_cmd->add_option("--family", rom_family,
                      "pg | gt | composite | product | misaligned | "
                      "mixed_near_t");
  rom_cmd->add_option("--state-file", rom_state_file,
                      "amplitude CSV instead of a family");
  rom_cmd->add_option("--n", rom_n, "family qubit count");
  rom_cmd->add_option("--alpha-sq", rom_alpha_sq, "family alpha^2");
  rom_cmd->add_option("--phi", rom_phi, "family phase");
  rom_cmd->add_option("--epsilon", rom_epsilon, "product family epsilon");
  rom_cmd->add_option("--blocks", rom_blocks, "composite blocks, e.g. pg2+pg3");
  rom_cmd->add_option("--zero-pad", rom_zero_pad, "composite |0> padding");
  rom_cmd->add_option("--seed", rom_seed, "seed for seeded families");
  rom_cmd->add_option("--max-k", rom_max_k, "largest subsystem");
  rom_cmd->add_flag("--no-nonlocal", rom_no_nlm, "skip nonlocal magic rows");
  rom_cmd->add_option("--dump-state", rom_dump_state,
                      "write the constructed amplitudes to this CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    msd::RunContext ctx(resolve_out_dir(out_flag), cache_dir, threads);
    std::filesystem::create_directories(ctx.out_dir);
    const std::string started = msd::utc_timestamp();

    auto parse_blocks = [](const std::string& arg) {
      std::vector<msd::CompositeSpec::Block> blocks;
      std::string token;
      std::istringstream ss(arg);
      while (std::getline(ss, token, '+')) {
        if (token.size() < 3) {
          throw std::invalid_argument("bad composite block: " + token);
        }
        const std::string fam = token.substr(0, 2);
        blocks.push_back({fam == "pg"
                              ? msd::CompositeSpec::BlockFamily::kPhaseGhz
                              : msd::CompositeSpec::BlockFamily::kGhzT,
                          std::stoi(token.substr(2)), M_SQRT1_2, M_PI / 4});
      }
      return blocks;
    };

    if (*threshold) {
      msd::ThresholdConfig cfg;
      cfg.epsilon_grid = msd::linspace(eps_lo, eps_hi, eps_points);
      cfg = merge_config(cfg, config_path);
      const auto summary = run_threshold_curve(cfg, ctx);
      msd::write_manifest(ctx, "threshold_curve", cfg.to_json(), 0, summary,
                          started);
      report(summary, ctx.out_dir);
    } else if (*sweep) {
      msd::FamilySweepConfig cfg;
      cfg.family = msd::StateFamilySpec::family_from_name(sweep_family);
      cfg.alpha_sq_grid = msd::linspace(0.0, 1.0, sweep_points);
      cfg.phi = sweep_phi;
      cfg.rounds = sweep_rounds;
      cfg.magic_profiles = !no_profiles;
      cfg.profile_max_k = profile_max_k;
      cfg.zero_pad = zero_pad;
      if (!blocks_arg.empty()) cfg.blocks = parse_blocks(blocks_arg);
      cfg = merge_config(cfg, config_path);
      const auto summary = run_family_sweep(cfg, ctx);
      msd::write_manifest(ctx, "family_sweep", cfg.to_json(), 0, summary,
                          started);
      report(summary, ctx.out_dir);
    } else if (*squeeze) {
      msd::SqueezeConfig cfg;
      cfg.protocol = protocol == "two_axis"
                         ? msd::SqueezeConfig::Protocol::kTwoAxis
                         : msd::SqueezeConfig::Protocol::kOneAxis;
      if (protocol != "one_axis" && protocol != "two_axis") {
        throw std::invalid_argument("unknown protocol: " + protocol);
      }
      cfg.family = msd::StateFamilySpec::family_from_name(squeeze_family);
      cfg.theta_bar = theta_bar;
      cfg.theta_max = theta_max;
      cfg.beta_max = beta_max;
      cfg.p_max = p_max;
      cfg.t_grid = msd::linspace(t_lo, t_hi, t_points);
      cfg.samples = squeeze_samples;
      cfg.target_fidelity = squeeze_target;
      cfg.seed = squeeze_seed;
      cfg = merge_config(cfg, config_path);
      if (!squeeze_seed_set && config_path.empty()) {
        throw std::invalid_argument("squeeze is a sampled study: --seed is "
                                    "required");
      }
      const auto summary = run_squeeze_study(cfg, ctx);
      msd::write_manifest(ctx, "squeeze_study", cfg.to_json(), cfg.seed,
                          summary, started);
      report(summary, ctx.out_dir);
    } else if (*sample) {
      msd::RandomStudyConfig cfg;
      cfg.samples = sample_count;
      cfg.lambda_min = lambda_min;
      cfg.cost_target = cost_target;
      cfg.max_lrom_k = max_lrom_k;
      cfg.lrom5 = lrom5;
      cfg.seed = sample_seed;
      cfg = merge_config(cfg, config_path);
      if (!sample_seed_set && config_path.empty()) {
        throw std::invalid_argument("sample is a sampled study: --seed is "
                                    "required");
      }
      const auto summary = run_random_state_study(cfg, ctx);
      msd::write_manifest(ctx, "random_state_study", cfg.to_json(), cfg.seed,
                          summary, started);
      report(summary, ctx.out_dir);
    } else if (*rom_cmd) {
      msd::RomReportConfig cfg;
      if (!rom_state_file.empty()) {
        cfg.state_file = rom_state_file;
      } else {
        msd::StateFamilySpec spec;
        spec.family = msd::StateFamilySpec::family_from_name(
            rom_family.empty() ? "gt" : rom_family);
        spec.n = rom_n;
        spec.alpha = std::sqrt(std::clamp(rom_alpha_sq, 0.0, 1.0));
        spec.phi = rom_phi;
        spec.epsilon = rom_epsilon;
        spec.zero_pad = rom_zero_pad;
        if (!rom_blocks.empty()) spec.blocks = parse_blocks(rom_blocks);
        spec.seed = rom_seed;
        spec.misaligned.seed = rom_seed;
        spec.mixed.seed = rom_seed;
        cfg.family = spec;
      }
      cfg.max_k = rom_max_k;
      cfg.nonlocal_pairs = !rom_no_nlm;
      if (!rom_dump_state.empty()) cfg.dump_state = rom_dump_state;
      cfg = merge_config(cfg, config_path);
      const auto summary = run_rom_report(cfg, ctx);
      msd::write_manifest(ctx, "rom_report", cfg.to_json(), rom_seed, summary,
                          started);
      report(summary, ctx.out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
