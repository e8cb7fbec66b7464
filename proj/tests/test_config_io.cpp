#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doa/cli.hpp"
#include "doa/config.hpp"
#include "doa/csv.hpp"
#include "doa/errors.hpp"

using namespace doa;

namespace {

namespace fs = std::filesystem;

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  return p;
}

const char* kMinimalConfig = R"(
[sim]
horizon_min = 5

[patient 1]
age_years = 30
weight_kg = 70
height_cm = 170
sex = male
)";

}  // namespace

TEST_CASE("shipped default config loads with the full cohort") {
  const fs::path path = fs::path(DOA_SOURCE_DIR) / "configs" / "default.cfg";
  const ExperimentConfig cfg = load_experiment_config(path);
  CHECK(cfg.patients.size() == 8);
  CHECK(cfg.sim.horizon_min == 30.0);
  CHECK(cfg.sim.dt_min == 0.01);
  CHECK(cfg.sim.bis_target == 50.0);
  CHECK(cfg.woa.pop_size == 30);
  CHECK(cfg.woa.max_iter == 100);
  CHECK(cfg.base.u_max == 200.0);
  CHECK(cfg.bounds_fopid.alpha.lo == 0.1);
  CHECK(cfg.bounds_fofpid.kp_max.hi == 20.0);
  CHECK(cfg.patients[2].sex == Sex::female);
  CHECK(cfg.patients[2].pd.ke0 == 0.456);

  // The tables shipped as data must match the built-in defaults.
  const RuleBase defaults = RuleBase::defaults();
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    for (std::size_t j = 0; j < kNumLabels; ++j) {
      CHECK(cfg.base.rules.kp.cells[i][j] == defaults.kp.cells[i][j]);
      CHECK(cfg.base.rules.ki.cells[i][j] == defaults.ki.cells[i][j]);
      CHECK(cfg.base.rules.kd.cells[i][j] == defaults.kd.cells[i][j]);
    }
  }
}

TEST_CASE("minimal config relies on documented defaults") {
  const fs::path p = write_temp("doa_minimal.cfg", kMinimalConfig);
  const ExperimentConfig cfg = load_experiment_config(p);
  CHECK(cfg.sim.horizon_min == 5.0);
  CHECK(cfg.sim.dt_min == 0.01);
  CHECK(cfg.patients.size() == 1);
  CHECK(cfg.patients[0].pd.ec50 == 2.65);
  CHECK(cfg.woa.pop_size == 30);
}

TEST_CASE("config errors carry file and line") {
  SUBCASE("unknown key") {
    const fs::path p = write_temp("doa_badkey.cfg",
                                  "[sim]\nhorizon_min = 5\nhorizon_mins = 5\n"
                                  "[patient 1]\nage_years = 30\nweight_kg = 70\n"
                                  "height_cm = 170\nsex = male\n");
    CHECK_THROWS_WITH_AS(load_experiment_config(p), doctest::Contains(":3:"), ConfigError);
  }
  SUBCASE("unknown section") {
    const fs::path p = write_temp("doa_badsec.cfg", "[simulate]\nhorizon_min = 5\n");
    CHECK_THROWS_WITH_AS(load_experiment_config(p), doctest::Contains(":1:"), ConfigError);
  }
  SUBCASE("bad number") {
    const fs::path p = write_temp("doa_badnum.cfg",
                                  "[sim]\nhorizon_min = fast\n[patient 1]\nage_years = 30\n"
                                  "weight_kg = 70\nheight_cm = 170\nsex = male\n");
    CHECK_THROWS_WITH_AS(load_experiment_config(p), doctest::Contains(":2:"), ConfigError);
  }
  SUBCASE("missing key") {
    const fs::path p = write_temp("doa_nokey.cfg", "[patient 1]\nage_years = 30\n");
    CHECK_THROWS_AS(load_experiment_config(p), ConfigError);
  }
  SUBCASE("invalid patient demographics") {
    const fs::path p = write_temp("doa_badpatient.cfg",
                                  "[patient 1]\nage_years = -3\nweight_kg = 70\n"
                                  "height_cm = 170\nsex = male\n");
    CHECK_THROWS_WITH_AS(load_experiment_config(p), doctest::Contains("age"), ConfigError);
  }
  SUBCASE("no patients") {
    const fs::path p = write_temp("doa_nopatients.cfg", "[sim]\nhorizon_min = 5\n");
    CHECK_THROWS_WITH_AS(load_experiment_config(p), doctest::Contains("patient"), ConfigError);
  }
}

TEST_CASE("per-patient pd overrides") {
  const fs::path p = write_temp("doa_pdover.cfg",
                                "[pd]\nke0_per_min = 0.5\n"
                                "[patient 1]\nage_years = 30\nweight_kg = 70\n"
                                "height_cm = 170\nsex = male\nec50_mg_per_l = 3.1\n");
  const ExperimentConfig cfg = load_experiment_config(p);
  CHECK(cfg.patients[0].pd.ke0 == 0.5);
  CHECK(cfg.patients[0].pd.ec50 == 3.1);
}

TEST_CASE("controller files round-trip exactly") {
  SUBCASE("fopid") {
    ControllerConfig c;
    c.variant = ControllerVariant::fopid;
    c.kp = 1.234567890123456;
    c.ki = 0.3;
    c.kd = 0.07;
    c.alpha = 0.912345678901234;
    c.beta = 1.1;
    c.u_max = 180;
    const fs::path p = fs::temp_directory_path() / "doa_fopid.cfg";
    save_controller_file(p, c, nullptr);
    const ControllerFile f = load_controller_file(p);
    CHECK(f.config.variant == ControllerVariant::fopid);
    CHECK(f.config.kp == c.kp);
    CHECK(f.config.ki == c.ki);
    CHECK(f.config.kd == c.kd);
    CHECK(f.config.alpha == c.alpha);
    CHECK(f.config.beta == c.beta);
    CHECK(f.config.u_max == c.u_max);
    CHECK_FALSE(f.audit.has_value());
  }
  SUBCASE("fofpid with audit") {
    ControllerConfig c;
    c.variant = ControllerVariant::fofpid;
    c.gain_ranges = {12.5, 3.25, 1.75};
    c.alpha = 0.77;
    c.beta = 1.21;
    c.mf_vector = {-0.61, -0.05, 0.44, -0.52, 0.02, 0.55, 0.21, 0.52, 0.8};
    TuneAudit audit;
    audit.variant = c.variant;
    audit.pop_size = 30;
    audit.max_iter = 100;
    audit.seed = 424242;
    audit.best_cost = 123.456789012345;
    audit.converged = true;
    audit.evals = 3030;
    audit.explore_count = 100;
    audit.encircle_count = 200;
    audit.spiral_count = 300;
    audit.best_unit_position = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.1, 0.2, 0.3, 0.4, 0.5};
    const fs::path p = fs::temp_directory_path() / "doa_fofpid.cfg";
    save_controller_file(p, c, &audit);
    const ControllerFile f = load_controller_file(p);
    CHECK(f.config.gain_ranges.kp_max == c.gain_ranges.kp_max);
    CHECK(f.config.mf_vector == c.mf_vector);
    for (std::size_t i = 0; i < kNumLabels; ++i) {
      for (std::size_t j = 0; j < kNumLabels; ++j) {
        CHECK(f.config.rules.kp.cells[i][j] == c.rules.kp.cells[i][j]);
      }
    }
    REQUIRE(f.audit.has_value());
    CHECK(f.audit->seed == audit.seed);
    CHECK(f.audit->best_cost == audit.best_cost);
    CHECK(f.audit->best_unit_position == audit.best_unit_position);
    CHECK(f.audit->bounds.kp_max.hi == 20.0);
  }
}

TEST_CASE("format9 output") {
  CHECK(format9(0.0) == "0");
  CHECK(format9(50.0) == "50");
  CHECK(format9(0.1) == "0.1");
  CHECK(format9(123.456789123) == "123.456789");
  CHECK(format9(-1.0 / 3.0) == "-0.333333333");
  // 9 significant digits parse back within 1e-9 relative.
  const double v = 987.6543210123;
  CHECK(std::abs(parse_double(format9(v)) - v) / v < 1e-9);
}

TEST_CASE("atomic write leaves no temp file behind") {
  const fs::path p = fs::temp_directory_path() / "doa_atomic.txt";
  atomic_write(p, "hello\n");
  CHECK(read_file(p) == "hello\n");
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));
}

TEST_CASE("golden CSV headers") {
  CHECK(std::string(kTrajHeader) == "t_min,bis,u_mg_per_min,ce_mg_per_l");
  CHECK(std::string(kSummaryHeader) == "patient_id,settling_time_min,sse,iae,itae,cost");
  CHECK(std::string(kTraceHeader) == "iteration,best_fitness");
  CHECK(std::string(kCompareHeader) == "patient_id,metric,a,b,delta");
  CHECK(std::string(kPairHeader) == "t_min,controller,bis,u_mg_per_min,ce_mg_per_l");
}

TEST_CASE("summary mean row over a single row equals that row") {
  SimConfig sim;
  sim.horizon_min = 1;
  std::vector<SimSample> samples;
  for (std::size_t k = 0; k <= sim.steps(); ++k) {
    samples.push_back({k * sim.dt_min, 52.5 + 0.01 * k, 3.0, 2.0});
  }
  const SummaryRow row = summary_row_from_samples("1", samples, sim);
  const SummaryRow mean = summary_mean_row({row});
  CHECK(mean.settling == row.settling);
  CHECK(mean.sse == row.sse);
  CHECK(mean.iae == row.iae);
  CHECK(mean.itae == row.itae);
  CHECK(mean.cost == row.cost);
  // Emitted identity: the cost cell is the sum of the printed iae/itae cells.
  CHECK(parse_double(row.cost) == parse_double(row.iae) + parse_double(row.itae));
}

TEST_CASE("trajectory csv round-trips and uses LF endings") {
  SimReport r;
  r.series = {{0.0, 100.0, 0.0, 0.0}, {0.01, 99.9999999, 12.3456789, 0.000123456789}};
  const std::string text = trajectory_csv(r);
  CHECK(text.find('\r') == std::string::npos);
  const fs::path p = fs::temp_directory_path() / "doa_traj.csv";
  atomic_write(p, text);
  const auto samples = parse_trajectory_csv(p);
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].bis == 100.0);
  CHECK(samples[1].t == 0.01);
  // Values survive the 9-digit format to 1e-9 relative.
  CHECK(std::abs(samples[1].u - 12.3456789) < 1e-8);
}
