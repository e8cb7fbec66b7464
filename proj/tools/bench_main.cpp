// Benchmark: serial reference path vs OpenMP path for the two hot sweeps,
// cohort simulation and WOA fitness evaluation. Also cross-checks that both
// paths produce identical results.
//
//   doa_bench [--config FILE] [--reps N] [--pop N] [--csv FILE]

#include <CLI11.hpp>
#include <chrono>
#include <cstring>
#include <iostream>
#include <random>
#include <sstream>

#include "doa/config.hpp"
#include "doa/csv.hpp"
#include "doa/parallel.hpp"
#include "doa/simloop.hpp"
#include "doa/tuning.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<doa::PatientProfile> default_cohort() {
  struct Row { int id; double age, w, h; doa::Sex sex; };
  const Row rows[] = {
      {1, 30, 70, 170, doa::Sex::male},   {2, 45, 80, 175, doa::Sex::male},
      {3, 60, 65, 165, doa::Sex::female}, {4, 25, 55, 160, doa::Sex::female},
      {5, 50, 90, 180, doa::Sex::male},   {6, 35, 60, 168, doa::Sex::female},
      {7, 55, 75, 172, doa::Sex::male},   {8, 40, 68, 170, doa::Sex::female},
  };
  std::vector<doa::PatientProfile> out;
  for (const Row& r : rows) {
    doa::PatientProfile p;
    p.id = r.id;
    p.age_years = r.age;
    p.weight_kg = r.w;
    p.height_cm = r.h;
    p.sex = r.sex;
    out.push_back(p);
  }
  return out;
}

bool reports_equal(const doa::CohortReport& a, const doa::CohortReport& b) {
  if (a.outcomes.size() != b.outcomes.size()) return false;
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    if (!a.outcomes[i].report || !b.outcomes[i].report) return false;
    const auto& sa = a.outcomes[i].report->series;
    const auto& sb = b.outcomes[i].report->series;
    if (sa.size() != sb.size()) return false;
    if (std::memcmp(sa.data(), sb.data(), sa.size() * sizeof(doa::SimSample)) != 0) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP benchmark for cohort and fitness sweeps"};
  std::string config_path, csv_path;
  int reps = 3;
  int pop = 24;
  app.add_option("--config", config_path, "experiment config (default: built-in cohort)");
  app.add_option("--reps", reps, "repetitions per measurement")->check(CLI::PositiveNumber);
  app.add_option("--pop", pop, "fitness sweep population size")->check(CLI::PositiveNumber);
  app.add_option("--csv", csv_path, "also write results as CSV");
  CLI11_PARSE(app, argc, argv);

  std::vector<doa::PatientProfile> patients;
  doa::SimConfig sim;
  doa::ControllerConfig ctrl;
  if (!config_path.empty()) {
    const doa::ExperimentConfig cfg = doa::load_experiment_config(config_path);
    patients = cfg.patients;
    sim = cfg.sim;
    ctrl = cfg.base;
  } else {
    patients = default_cohort();
  }
  ctrl.variant = doa::ControllerVariant::fopid;
  ctrl.kp = 2.0;
  ctrl.ki = 1.0;
  ctrl.kd = 0.5;
  ctrl.alpha = 0.9;
  ctrl.beta = 1.1;
  ctrl.dt = sim.dt_min;

  std::cout << "threads available: " << doa::max_threads() << ", cohort size: "
            << patients.size() << ", horizon " << sim.horizon_min << " min at dt "
            << sim.dt_min << "\n\n";

  struct Result { std::string name; double serial_s, openmp_s; };
  std::vector<Result> results;

  // --- cohort sweep ---------------------------------------------------------
  {
    doa::CohortReport ref, par;
    double ts = 1e300, tp = 1e300;
    for (int r = 0; r < reps; ++r) {
      auto t0 = Clock::now();
      ref = doa::run_cohort(patients, ctrl, sim, doa::ExecMode::serial);
      ts = std::min(ts, seconds_since(t0));
      t0 = Clock::now();
      par = doa::run_cohort(patients, ctrl, sim, doa::ExecMode::openmp);
      tp = std::min(tp, seconds_since(t0));
    }
    if (!reports_equal(ref, par)) {
      std::cerr << "FAIL: serial and OpenMP cohort sweeps disagree\n";
      return 1;
    }
    results.push_back({"cohort_sim", ts, tp});
  }

  // --- fitness sweep (one WOA generation worth of agents) -------------------
  {
    const auto variant = doa::ControllerVariant::fofpid;
    const doa::ControllerBounds bounds;
    const std::size_t dim = doa::agent_dim(variant);
    std::mt19937_64 rng(7);
    std::vector<std::vector<double>> agents(static_cast<std::size_t>(pop),
                                            std::vector<double>(dim));
    for (auto& a : agents) {
      for (double& x : a) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    std::vector<double> fit_s(agents.size()), fit_p(agents.size());
    auto sweep = [&](doa::ExecMode mode, std::vector<double>& fit) {
      doa::parallel_for(agents.size(), mode, [&](std::size_t i) {
        fit[i] = doa::tuning_objective(agents[i], variant, bounds, ctrl, patients, sim);
      });
    };
    double ts = 1e300, tp = 1e300;
    for (int r = 0; r < reps; ++r) {
      auto t0 = Clock::now();
      sweep(doa::ExecMode::serial, fit_s);
      ts = std::min(ts, seconds_since(t0));
      t0 = Clock::now();
      sweep(doa::ExecMode::openmp, fit_p);
      tp = std::min(tp, seconds_since(t0));
    }
    if (std::memcmp(fit_s.data(), fit_p.data(), fit_s.size() * sizeof(double)) != 0) {
      std::cerr << "FAIL: serial and OpenMP fitness sweeps disagree\n";
      return 1;
    }
    results.push_back({"fitness_sweep_pop" + std::to_string(pop), ts, tp});
  }

  std::ostringstream csv;
  csv << "kernel,serial_s,openmp_s,speedup\n";
  std::cout << "kernel                      serial [s]   openmp [s]   speedup\n";
  for (const Result& r : results) {
    const double speedup = r.serial_s / r.openmp_s;
    std::printf("%-26s %12.4f %12.4f %9.2fx\n", r.name.c_str(), r.serial_s, r.openmp_s,
                speedup);
    csv << r.name << ',' << doa::format9(r.serial_s) << ',' << doa::format9(r.openmp_s)
        << ',' << doa::format9(speedup) << '\n';
  }
  if (!csv_path.empty()) {
    doa::atomic_write(csv_path, csv.str());
    std::cout << "\nwrote " << csv_path << '\n';
  }
  return 0;
}
