#pragma once

// Controller tuning: WOA over the unit box, decoded per variant, with the
// cohort-mean (IAE + ITAE) cost as the objective.

#include <span>
#include <vector>

#include "doa/control.hpp"
#include "doa/simloop.hpp"
#include "doa/woa.hpp"

namespace doa {

// Everything needed to replicate a tuning run.
struct TuneAudit {
  ControllerVariant variant = ControllerVariant::pid;
  std::size_t pop_size = 0;
  std::size_t max_iter = 0;
  std::uint64_t seed = 0;
  double spiral_b = 1.0;
  WoaConfig::ExploreRef explore_ref = WoaConfig::ExploreRef::rand;
  ControllerBounds bounds{};
  std::vector<double> best_unit_position;
  double best_cost = 0;
  bool converged = false;  // false for a degenerate (max_iter = 0) budget
  std::uint64_t explore_count = 0, encircle_count = 0, spiral_count = 0, evals = 0;
  std::vector<double> trace;
};

struct TuneResult {
  ControllerConfig config;
  TuneAudit audit;
};

// Objective value for one decoded controller: mean cost over the cohort.
// Simulation blowups surface as +infinity (worst fitness), not exceptions.
double tuning_objective(std::span<const double> unit_pos, ControllerVariant variant,
                        const ControllerBounds& bounds, const ControllerConfig& base,
                        std::span<const PatientProfile> patients, const SimConfig& sim);

TuneResult tune_controller(ControllerVariant variant,
                           std::span<const PatientProfile> patients,
                           const SimConfig& sim, const WoaConfig& woa,
                           const ControllerBounds& bounds,
                           const ControllerConfig& base);

}  // namespace doa
