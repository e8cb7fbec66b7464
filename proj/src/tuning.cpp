#include "doa/tuning.hpp"

#include <limits>
#include <stdexcept>

#include "doa/errors.hpp"

namespace doa {

double tuning_objective(std::span<const double> unit_pos, ControllerVariant variant,
                        const ControllerBounds& bounds, const ControllerConfig& base,
                        std::span<const PatientProfile> patients, const SimConfig& sim) {
  const ControllerConfig cfg = decode_agent(unit_pos, variant, bounds, base);
  double acc = 0.0;
  for (const PatientProfile& p : patients) {
    try {
      acc += run_sim(p, cfg, sim).metrics.cost;
    } catch (const NumericError&) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return acc / static_cast<double>(patients.size());
}

TuneResult tune_controller(ControllerVariant variant,
                           std::span<const PatientProfile> patients,
                           const SimConfig& sim, const WoaConfig& woa,
                           const ControllerBounds& bounds,
                           const ControllerConfig& base) {
  if (patients.empty()) throw std::invalid_argument("tune_controller: empty patient set");

  WoaConfig cfg = woa;
  cfg.dim = agent_dim(variant);
  cfg.bounds.assign(cfg.dim, Interval{0.0, 1.0});

  const Objective objective = [&](std::span<const double> pos) {
    return tuning_objective(pos, variant, bounds, base, patients, sim);
  };
  const WoaResult r = optimize(cfg, objective);

  TuneResult out;
  out.config = decode_agent(r.best_position, variant, bounds, base);
  out.config.dt = sim.dt_min;

  out.audit.variant = variant;
  out.audit.pop_size = cfg.pop_size;
  out.audit.max_iter = cfg.max_iter;
  out.audit.seed = cfg.seed;
  out.audit.spiral_b = cfg.spiral_b;
  out.audit.explore_ref = cfg.explore_ref;
  out.audit.bounds = bounds;
  out.audit.best_unit_position = r.best_position;
  out.audit.best_cost = r.best_fitness;
  out.audit.converged = cfg.max_iter > 0;
  out.audit.explore_count = r.explore_count;
  out.audit.encircle_count = r.encircle_count;
  out.audit.spiral_count = r.spiral_count;
  out.audit.evals = r.evals;
  out.audit.trace = r.trace;
  return out;
}

}  // namespace doa
