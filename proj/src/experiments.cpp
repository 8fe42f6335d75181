#include "msd/experiments.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <ctime>
#include <fstream>
#include <thread>

#include "msd/clifford.hpp"
#include "msd/csv.hpp"
#include "msd/rng.hpp"

namespace msd {

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          fn(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> out;
  out.reserve(points);
  if (points == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < points; ++i) {
    out.push_back(lo + (hi - lo) * i / (points - 1));
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const RunContext& ctx, const std::string& experiment_id,
                    const nlohmann::json& config_echo, uint64_t seed,
                    const RunSummary& summary,
                    const std::string& started_utc) {
  nlohmann::json m;
  m["schema_version"] = kManifestSchemaVersion;
  m["artifact_version"] = kArtifactVersion;
  m["experiment"] = experiment_id;
  m["config"] = config_echo;
  m["seed"] = seed;
  m["started_utc"] = started_utc;
  m["finished_utc"] = utc_timestamp();
  nlohmann::json caches = nlohmann::json::object();
  for (const auto& [n, sum] : ctx.dicts.checksums()) {
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(sum));
    caches[std::to_string(n)] = {
        {"file",
         StabilizerDictionary::cache_file_name(n, ctx.cache_dir).string()},
        {"fnv64", hex}};
  }
  m["dictionary_caches"] = caches;
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : summary.tables) {
    tables.push_back({{"file", t.file}, {"rows", t.rows}});
  }
  m["tables"] = tables;
  m["extras"] = summary.extras;

  std::filesystem::create_directories(ctx.out_dir);
  const auto file = ctx.out_dir / "manifest.json";
  const auto tmp = ctx.out_dir / "manifest.json.tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << m.dump(2) << '\n';
    if (!os) throw std::runtime_error("manifest write failed");
  }
  std::filesystem::rename(tmp, file);
}

// ---------------------------------------------------------------- threshold

nlohmann::json ThresholdConfig::to_json() const {
  return {{"epsilon_grid", epsilon_grid}};
}

ThresholdConfig ThresholdConfig::from_json(const nlohmann::json& j) {
  ThresholdConfig c;
  if (j.contains("epsilon_grid")) {
    c.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
  }
  return c;
}

RunSummary run_threshold_curve(const ThresholdConfig& cfg, RunContext& ctx) {
  std::vector<double> grid = cfg.epsilon_grid;
  if (grid.empty()) grid = linspace(0.0, 0.5, 51);
  for (double e : grid) {
    if (e < 0.0 || e > 0.5) {
      throw std::invalid_argument("threshold grid epsilon outside [0, 0.5]");
    }
  }
  const auto curve = ctx.engine.output_fidelity_curve(grid);
  const double eps_star = ctx.engine.threshold();

  RunSummary summary;
  std::filesystem::create_directories(ctx.out_dir);
  {
    CsvWriter w(ctx.out_dir / "threshold_curve.csv",
                {"epsilon", "input_fidelity", "output_fidelity",
                 "success_probability"});
    for (const auto& p : curve) {
      w.cell(p.epsilon);
      w.cell(p.input_fidelity);
      w.cell(p.output_fidelity);
      w.cell(p.success_probability);
      w.end_row();
    }
    w.close();
    summary.tables.push_back({"threshold_curve.csv", w.rows_written()});
  }
  summary.extras["epsilon_star"] = eps_star;
  return summary;
}

// ------------------------------------------------------------- family sweep

nlohmann::json FamilySweepConfig::to_json() const {
  nlohmann::json j;
  j["family"] = StateFamilySpec::family_name(family);
  j["alpha_sq_grid"] = alpha_sq_grid;
  j["phi"] = phi;
  j["rounds"] = rounds;
  j["magic_profiles"] = magic_profiles;
  j["profile_max_k"] = profile_max_k;
  j["zero_pad"] = zero_pad;
  nlohmann::json bl = nlohmann::json::array();
  for (const auto& b : blocks) {
    bl.push_back({{"family", b.family == CompositeSpec::BlockFamily::kPhaseGhz
                                 ? "pg"
                                 : "gt"},
                  {"size", b.size},
                  {"alpha", b.alpha},
                  {"phi", b.phi}});
  }
  j["blocks"] = bl;
  return j;
}

FamilySweepConfig FamilySweepConfig::from_json(const nlohmann::json& j) {
  FamilySweepConfig c;
  if (j.contains("family")) {
    c.family = StateFamilySpec::family_from_name(j.at("family"));
  }
  if (j.contains("alpha_sq_grid")) {
    c.alpha_sq_grid = j.at("alpha_sq_grid").get<std::vector<double>>();
  }
  c.phi = j.value("phi", M_PI / 4);
  c.rounds = j.value("rounds", 10);
  c.magic_profiles = j.value("magic_profiles", true);
  c.profile_max_k = j.value("profile_max_k", 4);
  c.zero_pad = j.value("zero_pad", 0);
  if (j.contains("blocks")) {
    for (const auto& b : j.at("blocks")) {
      c.blocks.push_back({b.at("family").get<std::string>() == "pg"
                              ? CompositeSpec::BlockFamily::kPhaseGhz
                              : CompositeSpec::BlockFamily::kGhzT,
                          b.at("size").get<int>(), b.at("alpha").get<double>(),
                          b.value("phi", M_PI / 4)});
    }
  }
  return c;
}

namespace {

StateFamilySpec sweep_point_spec(const FamilySweepConfig& cfg,
                                 double alpha_sq) {
  StateFamilySpec spec;
  spec.family = cfg.family;
  spec.n = 5;
  spec.phi = cfg.phi;
  const double alpha = std::sqrt(std::clamp(alpha_sq, 0.0, 1.0));
  spec.alpha = alpha;
  // Product inputs are graded by the same axis as GT: epsilon = 1 - alpha^2.
  spec.epsilon = 1.0 - alpha_sq;
  spec.blocks = cfg.blocks;
  for (auto& b : spec.blocks) b.alpha = alpha;  // uniform across components
  spec.zero_pad = cfg.zero_pad;
  return spec;
}

}  // namespace

RunSummary run_family_sweep(const FamilySweepConfig& cfg, RunContext& ctx) {
  std::vector<double> grid = cfg.alpha_sq_grid;
  if (grid.empty()) grid = linspace(0.0, 1.0, 11);
  const int points = static_cast<int>(grid.size());

  std::vector<std::vector<SweepRow>> rounds_rows(points);
  std::vector<MagicProfile> profiles(points);
  parallel_for(points, ctx.threads, [&](int i) {
    rounds_rows[i] = ctx.engine.distillability_sweep(
        [&](double a2) { return sweep_point_spec(cfg, a2).realize(); },
        {grid[i]}, cfg.rounds);
    if (cfg.magic_profiles) {
      profiles[i] = magic_profile(sweep_point_spec(cfg, grid[i]).realize(),
                                  cfg.profile_max_k, ctx.dicts);
    }
  });

  RunSummary summary;
  {
    CsvWriter w(ctx.out_dir / "family_rounds.csv",
                {"family", "alpha_sq", "round", "success_probability",
                 "t_fidelity"});
    for (int i = 0; i < points; ++i) {
      for (const auto& r : rounds_rows[i]) {
        w.cell(StateFamilySpec::family_name(cfg.family));
        w.cell(r.parameter);
        w.cell(r.round);
        w.cell(r.success_probability);
        w.cell(r.t_fidelity);
        w.end_row();
      }
    }
    w.close();
    summary.tables.push_back({"family_rounds.csv", w.rows_written()});
  }
  if (cfg.magic_profiles) {
    CsvWriter w(ctx.out_dir / "family_magic.csv",
                {"alpha_sq", "subsystem", "k", "lrom"});
    for (int i = 0; i < points; ++i) {
      for (const auto& row : profiles[i].rows) {
        std::string qubits;
        for (int q : row.subsystem) {
          if (!qubits.empty()) qubits += ' ';
          qubits += std::to_string(q);
        }
        w.cell(grid[i]);
        w.cell(qubits);
        w.cell(row.k);
        w.cell(row.lrom);
        w.end_row();
      }
    }
    w.close();
    summary.tables.push_back({"family_magic.csv", w.rows_written()});
  }
  return summary;
}

// ------------------------------------------------------------ squeeze study

nlohmann::json SqueezeConfig::to_json() const {
  nlohmann::json j;
  j["protocol"] = protocol == Protocol::kOneAxis ? "one_axis" : "two_axis";
  j["family"] = StateFamilySpec::family_name(family);
  j["theta_bar"] = theta_bar;
  j["theta_max"] = theta_max;
  if (beta_bar.has_value()) j["beta_bar"] = *beta_bar;
  j["beta_max"] = beta_max;
  j["p_max"] = p_max;
  if (p_bar.has_value()) j["p_bar"] = *p_bar;
  if (mixed_phi.has_value()) j["mixed_phi"] = *mixed_phi;
  j["t_grid"] = t_grid;
  j["samples"] = samples;
  j["target_fidelity"] = target_fidelity;
  j["max_rounds"] = max_rounds;
  j["magic_summaries"] = magic_summaries;
  j["seed"] = seed;
  return j;
}

SqueezeConfig SqueezeConfig::from_json(const nlohmann::json& j) {
  SqueezeConfig c;
  if (j.contains("protocol")) {
    const std::string p = j.at("protocol");
    if (p == "one_axis") {
      c.protocol = Protocol::kOneAxis;
    } else if (p == "two_axis") {
      c.protocol = Protocol::kTwoAxis;
    } else {
      throw std::invalid_argument("unknown squeeze protocol: " + p);
    }
  }
  if (j.contains("family")) {
    c.family = StateFamilySpec::family_from_name(j.at("family"));
  }
  c.theta_bar = j.value("theta_bar", M_PI / 4);
  c.theta_max = j.value("theta_max", 0.05);
  if (j.contains("beta_bar")) c.beta_bar = j.at("beta_bar").get<double>();
  c.beta_max = j.value("beta_max", 0.05);
  c.p_max = j.value("p_max", 0.1);
  if (j.contains("p_bar")) c.p_bar = j.at("p_bar").get<double>();
  if (j.contains("mixed_phi")) c.mixed_phi = j.at("mixed_phi").get<double>();
  if (j.contains("t_grid")) {
    c.t_grid = j.at("t_grid").get<std::vector<double>>();
  }
  c.samples = j.value("samples", 100);
  c.target_fidelity = j.value("target_fidelity", 0.97);
  c.max_rounds = j.value("max_rounds", 15);
  c.magic_summaries = j.value("magic_summaries", true);
  c.seed = j.value("seed", uint64_t{0});
  return c;
}

RunSummary run_squeeze_study(const SqueezeConfig& cfg, RunContext& ctx) {
  if (cfg.family != StateFamilySpec::Family::kMisaligned &&
      cfg.family != StateFamilySpec::Family::kMixedNearT) {
    throw std::invalid_argument("squeeze study takes misaligned or "
                                "mixed_near_t inputs");
  }
  std::vector<double> t_grid = cfg.t_grid;
  if (t_grid.empty()) t_grid = linspace(0.0, M_PI, 21);

  const int nt = static_cast<int>(t_grid.size());
  const int ns = cfg.samples;

  // Squeezing unitaries are shared across samples.
  std::vector<Mat> unitaries(nt);
  for (int ti = 0; ti < nt; ++ti) {
    unitaries[ti] = cfg.protocol == SqueezeConfig::Protocol::kOneAxis
                        ? one_axis_twist(t_grid[ti])
                        : two_axis_countertwist(t_grid[ti]);
  }

  struct CostRow {
    double cost;
    int distillable;
    double p1, f1;
  };
  struct MagicRow {
    double s1_mean, lrom1_mean, lrom2_01, nlm_01;
  };
  std::vector<CostRow> cost_rows(nt * ns);
  std::vector<MagicRow> magic_rows(cfg.magic_summaries ? nt * ns : 0);

  parallel_for(nt * ns, ctx.threads, [&](int idx) {
    const int ti = idx / ns;
    const int si = idx % ns;
    // One initial state per sample index, reused across the t grid, so the
    // t = 0 rows are the unsqueezed baselines of the same states.
    const uint64_t sample_seed = derive_seed(cfg.seed, si);
    DensityOperator input = [&] {
      if (cfg.family == StateFamilySpec::Family::kMisaligned) {
        MisalignedSpinSpec spec{cfg.theta_bar, cfg.theta_max, sample_seed};
        return DensityOperator::pure(misaligned_product(spec));
      }
      MixedNearTSpec spec = near_t_defaults();
      if (cfg.beta_bar.has_value()) spec.beta_bar = *cfg.beta_bar;
      if (cfg.mixed_phi.has_value()) spec.phi = *cfg.mixed_phi;
      spec.beta_max = cfg.beta_max;
      spec.p_max = cfg.p_max;
      spec.p_bar = cfg.p_bar.value_or(1.0 - cfg.p_max);
      spec.seed = sample_seed;
      return mixed_near_t(spec);
    }();
    const DensityOperator squeezed = apply_unitary(unitaries[ti], input);
    const DistillationTrace trace =
        ctx.engine.iterate(squeezed, cfg.target_fidelity, cfg.max_rounds);
    CostRow row;
    row.cost = trace.cost;
    row.distillable =
        trace.verdict == DistillationTrace::Verdict::kDistilled ? 1 : 0;
    row.p1 = trace.rounds.empty() ? 0.0 : trace.rounds.front().first;
    row.f1 = trace.rounds.empty() ? 0.0 : trace.rounds.front().second;
    cost_rows[idx] = row;
    if (cfg.magic_summaries) {
      double s1 = 0.0, l1 = 0.0;
      for (int q = 0; q < 5; ++q) {
        const DensityOperator red = partial_trace(squeezed, SubsystemIndex{q});
        s1 += von_neumann_entropy(red);
        l1 += rom(red, ctx.dicts.get(1)).lrom;
      }
      const double l2 =
          lrom_subsystem(squeezed, SubsystemIndex{0, 1}, ctx.dicts);
      const double nlm = nonlocal_magic(squeezed, SubsystemIndex{0},
                                        SubsystemIndex{1}, ctx.dicts);
      magic_rows[idx] = {s1 / 5.0, l1 / 5.0, l2, nlm};
    }
  });

  RunSummary summary;
  const std::string proto =
      cfg.protocol == SqueezeConfig::Protocol::kOneAxis ? "one_axis"
                                                        : "two_axis";
  {
    CsvWriter w(ctx.out_dir / "squeeze_cost.csv",
                {"protocol", "t", "sample", "cost", "distillable",
                 "success_probability_round1", "t_fidelity_round1"});
    for (int ti = 0; ti < nt; ++ti) {
      for (int si = 0; si < ns; ++si) {
        const auto& r = cost_rows[ti * ns + si];
        w.cell(proto);
        w.cell(t_grid[ti]);
        w.cell(si);
        w.cell(r.cost);
        w.cell(r.distillable);
        w.cell(r.p1);
        w.cell(r.f1);
        w.end_row();
      }
    }
    w.close();
    summary.tables.push_back({"squeeze_cost.csv", w.rows_written()});
  }
  if (cfg.magic_summaries) {
    CsvWriter w(ctx.out_dir / "squeeze_magic.csv",
                {"protocol", "t", "sample", "entropy1_mean", "lrom1_mean",
                 "lrom2_01", "nonlocal_magic_01"});
    for (int ti = 0; ti < nt; ++ti) {
      for (int si = 0; si < ns; ++si) {
        const auto& r = magic_rows[ti * ns + si];
        w.cell(proto);
        w.cell(t_grid[ti]);
        w.cell(si);
        w.cell(r.s1_mean);
        w.cell(r.lrom1_mean);
        w.cell(r.lrom2_01);
        w.cell(r.nlm_01);
        w.end_row();
      }
    }
    w.close();
    summary.tables.push_back({"squeeze_magic.csv", w.rows_written()});
  }
  // Undistillable samples keep the -1 sentinel; aggregates skip them.
  nlohmann::json frac = nlohmann::json::array();
  for (int ti = 0; ti < nt; ++ti) {
    int ok = 0;
    double mean_cost = 0.0;
    for (int si = 0; si < ns; ++si) {
      const auto& r = cost_rows[ti * ns + si];
      if (r.distillable) {
        ++ok;
        mean_cost += r.cost;
      }
    }
    frac.push_back(
        {{"t", t_grid[ti]},
         {"distillable_fraction", static_cast<double>(ok) / ns},
         {"mean_cost_distillable",
          ok ? nlohmann::json(mean_cost / ok) : nlohmann::json()}});
  }
  summary.extras["per_t"] = frac;
  return summary;
}

// ------------------------------------------------------- random state study

nlohmann::json RandomStudyConfig::to_json() const {
  nlohmann::json j;
  j["samples"] = samples;
  j["lambda_min"] = lambda_min;
  if (fidelity_min.has_value()) j["fidelity_min"] = *fidelity_min;
  j["cost_target"] = cost_target;
  j["max_rounds"] = max_rounds;
  j["max_lrom_k"] = max_lrom_k;
  j["lrom5"] = lrom5;
  j["max_attempts_per_sample"] = max_attempts_per_sample;
  j["seed"] = seed;
  return j;
}

RandomStudyConfig RandomStudyConfig::from_json(const nlohmann::json& j) {
  RandomStudyConfig c;
  c.samples = j.value("samples", 100);
  c.lambda_min = j.value("lambda_min", 0.16);
  if (j.contains("fidelity_min")) {
    c.fidelity_min = j.at("fidelity_min").get<double>();
  }
  c.cost_target = j.value("cost_target", 0.999);
  c.max_rounds = j.value("max_rounds", 15);
  c.max_lrom_k = j.value("max_lrom_k", 4);
  c.lrom5 = j.value("lrom5", false);
  c.max_attempts_per_sample = j.value("max_attempts_per_sample", 100000);
  c.seed = j.value("seed", uint64_t{0});
  return c;
}

RunSummary run_random_state_study(const RandomStudyConfig& cfg,
                                  RunContext& ctx) {
  const double fidelity_min =
      cfg.fidelity_min.value_or(1.0 - ctx.engine.threshold());

  struct SampleData {
    double lambda_abs, p1, f1;
    int rounds_used;
    double cost;
    int attempts;
    std::vector<std::tuple<std::string, int, std::string, double>> magic;
    double lrom5 = std::nan("");
  };
  const int ns = cfg.samples;
  std::vector<SampleData> data(ns);

  parallel_for(ns, ctx.threads, [&](int si) {
    DistillableSampleOptions opt;
    opt.lambda_min = cfg.lambda_min;
    opt.fidelity_min = fidelity_min;
    opt.max_attempts = cfg.max_attempts_per_sample;
    const auto [psi, stats] =
        sample_distillable(ctx.engine, opt, derive_seed(cfg.seed, si));
    const DensityOperator rho = DensityOperator::pure(psi);
    const RoundResult r1 = ctx.engine.bk_round(rho);
    SampleData d;
    d.attempts = stats.attempts;
    d.lambda_abs = std::sqrt(r1.success_probability);
    d.p1 = r1.success_probability;
    d.f1 = r1.output_t_fidelity;
    const DistillationTrace trace =
        ctx.engine.iterate(rho, cfg.cost_target, cfg.max_rounds);
    d.rounds_used = trace.rounds_used;
    d.cost = trace.cost;
    const int n = rho.n_qubits();
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
      const int k = std::popcount(mask);
      if (k >= n) continue;
      std::vector<int> qs;
      for (int q = 0; q < n; ++q) {
        if ((mask >> q) & 1u) qs.push_back(q);
      }
      const SubsystemIndex sub{qs};
      std::string label;
      for (int q : qs) {
        if (!label.empty()) label += ' ';
        label += std::to_string(q);
      }
      if (k <= 2) {
        d.magic.emplace_back(label, k, "entropy",
                             von_neumann_entropy(partial_trace(rho, sub)));
      }
      if (k <= cfg.max_lrom_k) {
        d.magic.emplace_back(label, k, "lrom",
                             lrom_subsystem(rho, sub, ctx.dicts));
      }
    }
    if (cfg.lrom5) d.lrom5 = rom5_column_generation(rho).lrom;
    data[si] = std::move(d);
  });

  RunSummary summary;
  {
    CsvWriter w(ctx.out_dir / "random_states.csv",
                {"sample", "is_reference", "lambda_abs",
                 "success_probability", "t_fidelity_round1", "rounds_used",
                 "cost", "lrom5"});
    // Reference row: the encoded T state sits at lambda = 1, F = 1.
    const QubitRegisterState enc = encode(ctx.engine.code(), t_zero());
    const DensityOperator enc_rho = DensityOperator::pure(enc);
    const RoundResult ref = ctx.engine.bk_round(enc_rho);
    w.cell(-1);
    w.cell(1);
    w.cell(std::sqrt(ref.success_probability));
    w.cell(ref.success_probability);
    w.cell(ref.output_t_fidelity);
    w.cell(1);
    w.cell(5.0 / ref.success_probability);
    if (cfg.lrom5) {
      w.cell(rom5_column_generation(enc_rho).lrom);
    } else {
      w.cell("");
    }
    w.end_row();
    for (int si = 0; si < ns; ++si) {
      const auto& d = data[si];
      w.cell(si);
      w.cell(0);
      w.cell(d.lambda_abs);
      w.cell(d.p1);
      w.cell(d.f1);
      w.cell(d.rounds_used);
      w.cell(d.cost);
      if (std::isnan(d.lrom5)) {
        w.cell("");
      } else {
        w.cell(d.lrom5);
      }
      w.end_row();
    }
    w.close();
    summary.tables.push_back({"random_states.csv", w.rows_written()});
  }
  {
    CsvWriter w(ctx.out_dir / "random_state_magic.csv",
                {"sample", "subsystem", "k", "metric", "value"});
    for (int si = 0; si < ns; ++si) {
      for (const auto& [label, k, metric, value] : data[si].magic) {
        w.cell(si);
        w.cell(label);
        w.cell(k);
        w.cell(metric);
        w.cell(value);
        w.end_row();
      }
    }
    w.close();
    summary.tables.push_back({"random_state_magic.csv", w.rows_written()});
  }
  int attempts = 0;
  for (const auto& d : data) attempts += d.attempts;
  summary.extras["attempts"] = attempts;
  summary.extras["accepted"] = ns;
  summary.extras["acceptance_rate"] =
      attempts ? static_cast<double>(ns) / attempts : 0.0;
  summary.extras["fidelity_min"] = fidelity_min;
  return summary;
}

// --------------------------------------------------------------- rom report

nlohmann::json RomReportConfig::to_json() const {
  nlohmann::json j;
  if (family.has_value()) j["family_spec"] = family->to_json();
  if (state_file.has_value()) j["state_file"] = state_file->string();
  j["max_k"] = max_k;
  j["nonlocal_pairs"] = nonlocal_pairs;
  return j;
}

RomReportConfig RomReportConfig::from_json(const nlohmann::json& j) {
  RomReportConfig c;
  if (j.contains("family_spec")) {
    c.family = StateFamilySpec::from_json(j.at("family_spec"));
  }
  if (j.contains("state_file")) {
    c.state_file = std::filesystem::path(j.at("state_file").get<std::string>());
  }
  c.max_k = j.value("max_k", 4);
  c.nonlocal_pairs = j.value("nonlocal_pairs", true);
  return c;
}

RunSummary run_rom_report(const RomReportConfig& cfg, RunContext& ctx) {
  if (cfg.family.has_value() == cfg.state_file.has_value()) {
    throw std::invalid_argument("rom report needs exactly one of a family "
                                "spec or a state file");
  }
  DensityOperator state = [&] {
    if (cfg.state_file.has_value()) {
      return DensityOperator::pure(read_amplitudes_csv(*cfg.state_file));
    }
    return cfg.family->realize();
  }();
  if (cfg.dump_state.has_value()) {
    if (!cfg.family.has_value()) {
      throw std::invalid_argument("--dump-state needs a family spec");
    }
    write_amplitudes_csv(cfg.family->realize_pure(), *cfg.dump_state);
  }
  const int n = state.n_qubits();
  const int max_k = std::min(cfg.max_k, std::min(n, 4));

  MagicProfile profile = magic_profile(state, max_k, ctx.dicts);
  if (n <= 4) {
    // The full state fits the dictionaries; include it as its own row.
    const double full = rom(state, ctx.dicts.get(n)).lrom;
    std::vector<int> all;
    for (int q = 0; q < n; ++q) all.push_back(q);
    profile.rows.push_back({all, n, full});
  }

  RunSummary summary;
  {
    CsvWriter w(ctx.out_dir / "rom_report.csv",
                {"kind", "qubits_a", "qubits_b", "k", "value"});
    for (const auto& row : profile.rows) {
      std::string label;
      for (int q : row.subsystem) {
        if (!label.empty()) label += ' ';
        label += std::to_string(q);
      }
      w.cell("lrom");
      w.cell(label);
      w.cell("");
      w.cell(row.k);
      w.cell(row.lrom);
      w.end_row();
    }
    if (cfg.nonlocal_pairs) {
      for (int a = 0; a < n; ++a) {
        for (int b2 = a + 1; b2 < n; ++b2) {
          const double v = nonlocal_magic(state, SubsystemIndex{a},
                                          SubsystemIndex{b2}, ctx.dicts);
          w.cell("nonlocal_magic");
          w.cell(std::to_string(a));
          w.cell(std::to_string(b2));
          w.cell(2);
          w.cell(v);
          w.end_row();
        }
      }
    }
    w.close();
    summary.tables.push_back({"rom_report.csv", w.rows_written()});
  }
  summary.extras["profile"] = to_json(profile);
  return summary;
}

}  // namespace msd
