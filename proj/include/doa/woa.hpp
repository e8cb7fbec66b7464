#pragma once

// Whale Optimization Algorithm: bound-constrained continuous minimization
// with the three canonical update moves (random-agent exploration,
// encircling, logarithmic-spiral) selected per agent each iteration.
//
// Determinism contract: all random numbers come from a seeded mt19937_64
// via a fixed 64->53 bit mapping and are drawn serially in agent order
// before fitness evaluations are dispatched, so results are identical for
// any thread count and across platforms.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "doa/control.hpp"  // Interval
#include "doa/parallel.hpp"

namespace doa {

struct WoaConfig {
  std::size_t pop_size = 30;
  std::size_t max_iter = 100;
  std::size_t dim = 0;
  std::vector<Interval> bounds;  // one per dimension, lo < hi
  double spiral_b = 1.0;
  std::uint64_t seed = 1;
  // The published exploration step reuses the incumbent on its right-hand
  // side where the original formulation uses the random agent; likely a
  // typo, so both are selectable. `rand` is the default.
  enum class ExploreRef { rand, best };
  ExploreRef explore_ref = ExploreRef::rand;
  ExecMode exec = ExecMode::openmp;

  void validate() const;
};

struct WoaResult {
  std::vector<double> best_position;
  double best_fitness = 0;
  std::vector<double> trace;  // best-so-far after init and each iteration
  std::uint64_t explore_count = 0;
  std::uint64_t encircle_count = 0;
  std::uint64_t spiral_count = 0;
  std::uint64_t evals = 0;
};

using Objective = std::function<double(std::span<const double>)>;

// Exploitation pressure schedule: a(t) = 2 (1 - t / max_iter).
double a_schedule(std::size_t t, std::size_t max_iter);

// Portable uniform draw in [0, 1): top 53 bits of the generator output.
double u01(std::mt19937_64& rng);

// Minimize `objective` over the bounded box. Non-finite objective values
// are treated as +infinity (worst) and the run continues.
WoaResult optimize(const WoaConfig& cfg, const Objective& objective);

}  // namespace doa
