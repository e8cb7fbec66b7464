#include "doa/woa.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace doa {

void WoaConfig::validate() const {
  if (pop_size < 2) throw std::invalid_argument("woa: pop_size must be >= 2");
  if (dim < 1) throw std::invalid_argument("woa: dim must be >= 1");
  if (bounds.size() != dim) throw std::invalid_argument("woa: bounds size must equal dim");
  for (const Interval& b : bounds) {
    if (!(b.lo < b.hi)) throw std::invalid_argument("woa: each bound must have lo < hi");
  }
}

double a_schedule(std::size_t t, std::size_t max_iter) {
  return 2.0 * (1.0 - static_cast<double>(t) / static_cast<double>(max_iter));
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

double safe_fitness(const Objective& f, std::span<const double> x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

WoaResult optimize(const WoaConfig& cfg, const Objective& objective) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);

  const std::size_t pop = cfg.pop_size, dim = cfg.dim;
  std::vector<std::vector<double>> pos(pop, std::vector<double>(dim));
  std::vector<double> fit(pop, std::numeric_limits<double>::infinity());

  // Initial population, drawn agent-major then dimension-major.
  for (std::size_t i = 0; i < pop; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      pos[i][d] = cfg.bounds[d].lo + u01(rng) * (cfg.bounds[d].hi - cfg.bounds[d].lo);
    }
  }

  WoaResult res;
  parallel_for(pop, cfg.exec, [&](std::size_t i) { fit[i] = safe_fitness(objective, pos[i]); });
  res.evals += pop;

  res.best_fitness = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pop; ++i) {
    if (fit[i] < res.best_fitness) {
      res.best_fitness = fit[i];
      res.best_position = pos[i];
    }
  }
  if (res.best_position.empty()) res.best_position = pos[0];  // all infinite
  res.trace.push_back(res.best_fitness);

  std::vector<double> a_vec(dim), c_vec(dim);
  for (std::size_t t = 0; t < cfg.max_iter; ++t) {
    const double a = a_schedule(t, cfg.max_iter);

    // Position updates are serial: the random stream must not depend on
    // scheduling. The incumbent is held fixed for the whole pass.
    for (std::size_t i = 0; i < pop; ++i) {
      const double p = u01(rng);
      const double l = 2.0 * u01(rng) - 1.0;
      const std::size_t q = std::min(pop - 1, static_cast<std::size_t>(u01(rng) * static_cast<double>(pop)));
      double a_norm_sq = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        a_vec[d] = 2.0 * a * u01(rng) - a;
        c_vec[d] = 2.0 * u01(rng);
        a_norm_sq += a_vec[d] * a_vec[d];
      }

      std::vector<double>& x = pos[i];
      if (p < 0.5) {
        if (std::sqrt(a_norm_sq) >= 1.0) {
          // Exploration around a random agent.
          ++res.explore_count;
          const std::vector<double>& xr = pos[q];
          const std::vector<double>& ref =
              (cfg.explore_ref == WoaConfig::ExploreRef::rand) ? xr : res.best_position;
          for (std::size_t d = 0; d < dim; ++d) {
            const double dist = std::abs(c_vec[d] * xr[d] - x[d]);
            x[d] = ref[d] - a_vec[d] * dist;
          }
        } else {
          // Encircling the incumbent.
          ++res.encircle_count;
          for (std::size_t d = 0; d < dim; ++d) {
            const double dist = std::abs(c_vec[d] * res.best_position[d] - x[d]);
            x[d] = res.best_position[d] - a_vec[d] * dist;
          }
        }
      } else {
        // Logarithmic spiral around the incumbent.
        ++res.spiral_count;
        const double swirl = std::exp(cfg.spiral_b * l) * std::cos(2.0 * std::numbers::pi * l);
        for (std::size_t d = 0; d < dim; ++d) {
          const double dist = std::abs(res.best_position[d] - x[d]);
          x[d] = dist * swirl + res.best_position[d];
        }
      }
      for (std::size_t d = 0; d < dim; ++d) {
        x[d] = clamp(x[d], cfg.bounds[d].lo, cfg.bounds[d].hi);
      }
    }

    parallel_for(pop, cfg.exec, [&](std::size_t i) { fit[i] = safe_fitness(objective, pos[i]); });
    res.evals += pop;

    for (std::size_t i = 0; i < pop; ++i) {
      if (fit[i] < res.best_fitness) {
        res.best_fitness = fit[i];
        res.best_position = pos[i];
      }
    }
    res.trace.push_back(res.best_fitness);
  }

  return res;
}

}  // namespace doa
