#pragma once

// Closed-loop simulation: plant + controller over a fixed horizon, with
// IAE/ITAE/cost and clinical metrics, optional additive disturbance on the
// measured BIS, and an OpenMP cohort sweep with a serial reference path.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "doa/control.hpp"
#include "doa/parallel.hpp"
#include "doa/pkpd.hpp"

namespace doa {

// Additive step on the measured BIS (surgical-stimulus stand-in).
struct Disturbance {
  double onset_min = 0;
  double magnitude_bis = 0;
  double duration_min = 0;
};

struct SimConfig {
  double horizon_min = 30.0;
  double dt_min = 0.01;
  double bis_target = 50.0;
  double band_low = 40.0;
  double band_high = 60.0;
  double settle_tol = 5.0;  // +- BIS units for the settling band
  std::optional<Disturbance> disturbance;

  void validate() const;
  std::size_t steps() const;  // horizon / dt, rounded
};

struct SimSample {
  double t = 0;    // min
  double bis = 0;  // as measured by the controller (incl. disturbance)
  double u = 0;    // mg/min
  double ce = 0;   // mg/L
};

struct Metrics {
  double settling_time_min = 0;
  bool settled = false;
  double steady_state_error = 0;  // mean |bis - target| over final 10%
  double iae = 0;
  double itae = 0;
  double cost = 0;  // always iae + itae
  double bis_min = 0;  // band compliance is reported, never assumed
  double bis_max = 0;
};

struct SimReport {
  std::vector<SimSample> series;  // steps() + 1 samples
  Metrics metrics;
  double max_clamp = 0;  // largest positivity clamp the integrator applied
};

// Closed loop with the given controller config. Deterministic.
SimReport run_sim(const PatientProfile& patient, const ControllerConfig& ctrl,
                  const SimConfig& sim);

// Same loop with an arbitrary control law u = f(bis_measured, t); used by
// tests to cross-check against open-loop plant integration.
SimReport run_sim_with(const PatientProfile& patient, const SimConfig& sim,
                       const std::function<double(double, double)>& law);

// Metrics from a uniformly sampled series (left-rectangular quadrature).
// Throws std::invalid_argument on an empty series.
Metrics compute_metrics(std::span<const SimSample> series, const SimConfig& sim);

struct PatientOutcome {
  int patient_id = 0;
  std::optional<SimReport> report;  // empty on failure
  std::string error;                // failure description
};

struct CohortReport {
  std::vector<PatientOutcome> outcomes;
  Metrics mean;              // arithmetic means over successful patients
  std::size_t failures = 0;  // settled in mean = all patients settled
};

// Per-patient simulations (parallel across patients under ExecMode::openmp)
// plus aggregate means. Individual failures are recorded, not thrown.
CohortReport run_cohort(std::span<const PatientProfile> patients,
                        const ControllerConfig& ctrl, const SimConfig& sim,
                        ExecMode mode = ExecMode::openmp);

}  // namespace doa
