#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "msd/csv.hpp"
#include "msd/experiments.hpp"

using namespace msd;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const fs::path kCache = fs::temp_directory_path() / "msd_exp_cache";

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += (c == '\n');
  return n;
}

}  // namespace

TEST_CASE("csv formatting uses 12 significant digits") {
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-1.0) == "-1");
  CHECK(format_double(1.23456789012345e-7) == "1.23456789012e-07");
}

TEST_CASE("threshold runner output") {
  RunContext ctx(fresh_dir("msd_thr"), kCache, 2);
  ThresholdConfig cfg;
  cfg.epsilon_grid = linspace(0.0, 0.5, 26);
  const auto summary = run_threshold_curve(cfg, ctx);
  write_manifest(ctx, "threshold_curve", cfg.to_json(), 0, summary,
                 utc_timestamp());

  CHECK(summary.tables.size() == 1);
  CHECK(summary.tables[0].rows == 26);
  const double eps_star = summary.extras.at("epsilon_star").get<double>();
  CHECK(std::abs(eps_star - 0.173) < 0.003);

  const std::string csv = slurp(ctx.out_dir / "threshold_curve.csv");
  CHECK(count_lines(csv) == 27);  // header + rows
  CHECK(csv.rfind("epsilon,input_fidelity,output_fidelity,"
                  "success_probability\n",
                  0) == 0);

  const auto manifest =
      nlohmann::json::parse(slurp(ctx.out_dir / "manifest.json"));
  CHECK(manifest.at("schema_version") == kManifestSchemaVersion);
  CHECK(manifest.at("experiment") == "threshold_curve");
  CHECK(manifest.at("tables")[0].at("rows") == 26);
  CHECK(manifest.at("config").at("epsilon_grid").size() == 26);
}

TEST_CASE("runs are byte-reproducible across thread counts") {
  SqueezeConfig cfg;
  cfg.t_grid = {0.0, 0.5, 1.0};
  cfg.samples = 6;
  cfg.seed = 31415;

  RunContext ctx1(fresh_dir("msd_sq1"), kCache, 1);
  const auto s1 = run_squeeze_study(cfg, ctx1);
  RunContext ctx2(fresh_dir("msd_sq2"), kCache, 2);
  const auto s2 = run_squeeze_study(cfg, ctx2);

  for (const char* table : {"squeeze_cost.csv", "squeeze_magic.csv"}) {
    const std::string a = slurp(ctx1.out_dir / table);
    const std::string b = slurp(ctx2.out_dir / table);
    CHECK(a == b);
    CHECK(!a.empty());
  }
  CHECK(s1.extras == s2.extras);

  // Different seed changes the tables.
  cfg.seed = 27182;
  RunContext ctx3(fresh_dir("msd_sq3"), kCache, 2);
  run_squeeze_study(cfg, ctx3);
  CHECK(slurp(ctx1.out_dir / "squeeze_cost.csv") !=
        slurp(ctx3.out_dir / "squeeze_cost.csv"));
}

TEST_CASE("squeeze study semantics at t = 0") {
  SqueezeConfig cfg;
  cfg.t_grid = {0.0};
  cfg.samples = 8;
  cfg.seed = 99;
  cfg.magic_summaries = false;
  RunContext ctx(fresh_dir("msd_sq0"), kCache, 2);
  const auto summary = run_squeeze_study(cfg, ctx);
  // theta_bar = pi/4, theta_max = 0.05 without squeezing: nothing distills,
  // every cost is the -1 sentinel.
  const auto& per_t = summary.extras.at("per_t");
  CHECK(per_t[0].at("distillable_fraction").get<double>() == 0.0);
  CHECK(per_t[0].at("mean_cost_distillable").is_null());
  const std::string csv = slurp(ctx.out_dir / "squeeze_cost.csv");
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);  // header
  int rows = 0;
  while (std::getline(is, line)) {
    CHECK(line.find(",-1,0,") != std::string::npos);  // cost -1, flag 0
    ++rows;
  }
  CHECK(rows == 8);
}

TEST_CASE("random study output shape") {
  RandomStudyConfig cfg;
  cfg.samples = 5;
  cfg.max_lrom_k = 2;
  cfg.seed = 777;
  RunContext ctx(fresh_dir("msd_rand"), kCache, 2);
  const auto summary = run_random_state_study(cfg, ctx);
  write_manifest(ctx, "random_state_study", cfg.to_json(), cfg.seed, summary,
                 utc_timestamp());

  CHECK(summary.extras.at("accepted") == 5);
  CHECK(summary.extras.at("attempts").get<int>() >= 5);
  const double rate = summary.extras.at("acceptance_rate").get<double>();
  CHECK(rate > 0.0);
  CHECK(rate <= 1.0);

  const std::string csv = slurp(ctx.out_dir / "random_states.csv");
  CHECK(count_lines(csv) == 1 + 1 + 5);  // header + reference + samples
  std::istringstream is(csv);
  std::string header, reference;
  std::getline(is, header);
  std::getline(is, reference);
  // Reference row: sample -1, is_reference 1, lambda 1, p 1, F 1.
  CHECK(reference.rfind("-1,1,1,1,1,", 0) == 0);

  // magic table: per sample, 5 entropy@k1 + 10 entropy@k2 + 5 lrom@k1 +
  // 10 lrom@k2 rows.
  const std::string magic = slurp(ctx.out_dir / "random_state_magic.csv");
  CHECK(count_lines(magic) == 1 + 5 * 30);
}

TEST_CASE("rom report for a family and a state file") {
  RomReportConfig cfg;
  StateFamilySpec spec;
  spec.family = StateFamilySpec::Family::kGhzT;
  spec.n = 4;
  spec.alpha = std::sqrt(0.5);
  cfg.family = spec;
  cfg.max_k = 2;
  RunContext ctx(fresh_dir("msd_rom"), kCache, 2);
  const auto summary = run_rom_report(cfg, ctx);
  // Proper subsystems of size <= 2 (4 + 6 rows) + the full state row +
  // nonlocal pairs (6 rows).
  CHECK(summary.tables[0].rows == 4 + 6 + 1 + 6);
  const std::string csv = slurp(ctx.out_dir / "rom_report.csv");
  CHECK(csv.find("nonlocal_magic") != std::string::npos);

  // State-file route: dump a state, then report on it.
  RomReportConfig dump_cfg;
  StateFamilySpec pg;
  pg.family = StateFamilySpec::Family::kPhaseGhz;
  pg.n = 3;
  pg.alpha = std::sqrt(0.3);
  dump_cfg.family = pg;
  dump_cfg.max_k = 1;
  dump_cfg.nonlocal_pairs = false;
  dump_cfg.dump_state = ctx.out_dir / "state.csv";
  RunContext ctx2(fresh_dir("msd_rom2"), kCache, 2);
  run_rom_report(dump_cfg, ctx2);

  RomReportConfig file_cfg;
  file_cfg.state_file = dump_cfg.dump_state;
  file_cfg.max_k = 1;
  file_cfg.nonlocal_pairs = false;
  RunContext ctx3(fresh_dir("msd_rom3"), kCache, 2);
  const auto s3 = run_rom_report(file_cfg, ctx3);
  CHECK(s3.tables[0].rows == 3 + 1);

  // Exactly one source must be given.
  RomReportConfig neither;
  RunContext ctx4(fresh_dir("msd_rom4"), kCache, 2);
  CHECK_THROWS_AS(run_rom_report(neither, ctx4), std::invalid_argument);
}

TEST_CASE("config json round trips") {
  SqueezeConfig sq;
  sq.protocol = SqueezeConfig::Protocol::kTwoAxis;
  sq.family = StateFamilySpec::Family::kMixedNearT;
  sq.p_max = 0.07;
  sq.seed = 5;
  const auto back = SqueezeConfig::from_json(sq.to_json());
  CHECK(back.protocol == SqueezeConfig::Protocol::kTwoAxis);
  CHECK(back.family == StateFamilySpec::Family::kMixedNearT);
  CHECK(back.p_max == doctest::Approx(0.07));
  CHECK(back.seed == 5);

  RandomStudyConfig rs;
  rs.samples = 17;
  rs.lrom5 = true;
  const auto rs2 = RandomStudyConfig::from_json(rs.to_json());
  CHECK(rs2.samples == 17);
  CHECK(rs2.lrom5);

  FamilySweepConfig fsw;
  fsw.family = StateFamilySpec::Family::kComposite;
  fsw.blocks = {{CompositeSpec::BlockFamily::kPhaseGhz, 2, 0.5, 0.1},
                {CompositeSpec::BlockFamily::kGhzT, 3, 0.5, 0.2}};
  const auto fsw2 = FamilySweepConfig::from_json(fsw.to_json());
  CHECK(fsw2.blocks.size() == 2);
  CHECK(fsw2.blocks[1].size == 3);
}

TEST_CASE("family sweep on a coarse product grid") {
  FamilySweepConfig cfg;
  cfg.family = StateFamilySpec::Family::kProduct;
  cfg.alpha_sq_grid = {0.5, 1.0};
  cfg.rounds = 2;
  cfg.magic_profiles = false;
  RunContext ctx(fresh_dir("msd_sweep"), kCache, 2);
  const auto summary = run_family_sweep(cfg, ctx);
  CHECK(summary.tables[0].rows == 4);
  const std::string csv = slurp(ctx.out_dir / "family_rounds.csv");
  // alpha^2 = 1 is the epsilon = 0 conventional input: p = 1/6.
  CHECK(csv.find("product,1,1,0.166666666667,1") != std::string::npos);
}
