#include "doa/simloop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doa/errors.hpp"

namespace doa {

void SimConfig::validate() const {
  if (!(horizon_min > 0)) throw std::invalid_argument("sim: horizon must be > 0");
  if (!(dt_min > 0)) throw std::invalid_argument("sim: dt must be > 0");
  if (!(band_low < bis_target && bis_target < band_high)) {
    throw std::invalid_argument("sim: band must satisfy low < target < high");
  }
  if (!(settle_tol > 0)) throw std::invalid_argument("sim: settle_tol must be > 0");
  if (disturbance) {
    if (disturbance->onset_min < 0 || disturbance->duration_min < 0) {
      throw std::invalid_argument("sim: disturbance onset/duration must be >= 0");
    }
  }
}

std::size_t SimConfig::steps() const {
  return static_cast<std::size_t>(std::llround(horizon_min / dt_min));
}

namespace {

double disturbance_at(const SimConfig& sim, double t) {
  if (!sim.disturbance) return 0.0;
  const Disturbance& d = *sim.disturbance;
  return (t >= d.onset_min && t < d.onset_min + d.duration_min) ? d.magnitude_bis : 0.0;
}

SimReport run_loop(const PatientProfile& patient, const SimConfig& sim,
                   const std::function<double(double, double)>& law) {
  patient.validate();
  sim.validate();
  const PkCoefficients coeffs = compute_pk(patient);
  const std::size_t n = sim.steps();

  SimReport report;
  report.series.reserve(n + 1);

  PlantState state;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * sim.dt_min;
    const double bis_measured = bis_of(state.ce, patient.pd) + disturbance_at(sim, t);
    double u = 0.0;
    try {
      u = law(bis_measured, t);
    } catch (const NumericError& ex) {
      throw NumericError("patient " + std::to_string(patient.id) + " step " +
                         std::to_string(k) + ": " + ex.what());
    }
    report.series.push_back({t, bis_measured, u, state.ce});
    if (k == n) break;
    double clamp_mag = 0.0;
    try {
      state = step_plant(state, coeffs, patient.pd, u, sim.dt_min, &clamp_mag);
    } catch (const NumericError& ex) {
      throw NumericError("patient " + std::to_string(patient.id) + " step " +
                         std::to_string(k) + ": " + ex.what());
    }
    report.max_clamp = std::max(report.max_clamp, clamp_mag);
  }

  report.metrics = compute_metrics(report.series, sim);
  return report;
}

}  // namespace

SimReport run_sim_with(const PatientProfile& patient, const SimConfig& sim,
                       const std::function<double(double, double)>& law) {
  return run_loop(patient, sim, law);
}

SimReport run_sim(const PatientProfile& patient, const ControllerConfig& ctrl,
                  const SimConfig& sim) {
  if (std::abs(ctrl.dt - sim.dt_min) > 1e-12) {
    throw std::invalid_argument("run_sim: controller dt must equal sim dt");
  }
  ControllerState st = reset_controller(ctrl);
  return run_loop(patient, sim, [&](double bis, double) {
    return control_step(ctrl, st, bis, sim.bis_target);
  });
}

Metrics compute_metrics(std::span<const SimSample> series, const SimConfig& sim) {
  if (series.empty()) throw std::invalid_argument("compute_metrics: empty series");

  Metrics m;
  const double dt = sim.dt_min;
  const std::size_t n = series.size();

  m.bis_min = series[0].bis;
  m.bis_max = series[0].bis;
  for (const SimSample& s : series) {
    m.bis_min = std::min(m.bis_min, s.bis);
    m.bis_max = std::max(m.bis_max, s.bis);
  }

  // Left-rectangular quadrature over the n-1 intervals.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double ae = std::abs(series[k].bis - sim.bis_target);
    m.iae += ae * dt;
    m.itae += series[k].t * ae * dt;
  }
  m.cost = m.iae + m.itae;

  // First instant after which the series stays within the settle band.
  std::size_t last_out = n;  // sentinel: never out of band
  for (std::size_t k = n; k-- > 0;) {
    if (std::abs(series[k].bis - sim.bis_target) > sim.settle_tol) {
      last_out = k;
      break;
    }
  }
  if (last_out == n) {
    m.settled = true;
    m.settling_time_min = 0.0;
  } else if (last_out + 1 < n) {
    m.settled = true;
    m.settling_time_min = series[last_out + 1].t;
  } else {
    m.settled = false;
    m.settling_time_min = series.back().t;
  }

  // Mean absolute deviation over the final 10% of samples.
  const std::size_t tail_start = (n - 1) - (n - 1) / 10;
  double acc = 0.0;
  for (std::size_t k = tail_start; k < n; ++k) {
    acc += std::abs(series[k].bis - sim.bis_target);
  }
  m.steady_state_error = acc / static_cast<double>(n - tail_start);
  return m;
}

CohortReport run_cohort(std::span<const PatientProfile> patients,
                        const ControllerConfig& ctrl, const SimConfig& sim,
                        ExecMode mode) {
  if (patients.empty()) throw std::invalid_argument("run_cohort: empty cohort");

  CohortReport cohort;
  cohort.outcomes.resize(patients.size());

  parallel_for(patients.size(), mode, [&](std::size_t i) {
    PatientOutcome& out = cohort.outcomes[i];
    out.patient_id = patients[i].id;
    try {
      out.report = run_sim(patients[i], ctrl, sim);
    } catch (const std::exception& ex) {
      out.error = ex.what();
    }
  });

  // Serial reduction in patient order keeps the means bitwise deterministic.
  std::size_t ok = 0;
  bool all_settled = true;
  for (const PatientOutcome& out : cohort.outcomes) {
    if (!out.report) {
      ++cohort.failures;
      continue;
    }
    const Metrics& pm = out.report->metrics;
    cohort.mean.settling_time_min += pm.settling_time_min;
    cohort.mean.steady_state_error += pm.steady_state_error;
    cohort.mean.iae += pm.iae;
    cohort.mean.itae += pm.itae;
    cohort.mean.bis_min += pm.bis_min;
    cohort.mean.bis_max += pm.bis_max;
    all_settled = all_settled && pm.settled;
    ++ok;
  }
  if (ok > 0) {
    const double inv = 1.0 / static_cast<double>(ok);
    cohort.mean.settling_time_min *= inv;
    cohort.mean.steady_state_error *= inv;
    cohort.mean.iae *= inv;
    cohort.mean.itae *= inv;
    cohort.mean.bis_min *= inv;
    cohort.mean.bis_max *= inv;
    cohort.mean.cost = cohort.mean.iae + cohort.mean.itae;
    cohort.mean.settled = all_settled;
  }
  return cohort;
}

}  // namespace doa
