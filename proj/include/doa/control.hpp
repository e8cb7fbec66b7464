#pragma once

// The three controller laws: integer-order PID, fractional-order PID, and
// FOPID with fuzzy-scheduled gains. All variants share one step interface:
// measured BIS in, non-negative infusion command out.
//
// Sign convention: internally e = measured - target, so a patient that is
// too awake (BIS above target) produces a positive error and therefore a
// positive infusion command under non-negative gains. The output is clamped
// to [0, u_max]; conditional anti-windup freezes the integral history while
// the command is saturated against the error sign.

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "doa/fracops.hpp"
#include "doa/fuzzy.hpp"

namespace doa {

enum class ControllerVariant { pid, fopid, fofpid };

std::string to_string(ControllerVariant v);
ControllerVariant variant_from_string(const std::string& s);

// Upper bounds for the fuzzy-scheduled gains: effective gain = norm * max.
struct GainRanges {
  double kp_max = 0, ki_max = 0, kd_max = 0;
};

struct ControllerConfig {
  ControllerVariant variant = ControllerVariant::pid;
  double kp = 0, ki = 0, kd = 0;  // base gains (pid, fopid)
  double alpha = 1.0;             // integral order, (0, 2)
  double beta = 1.0;              // derivative order, (0, 2)
  GainRanges gain_ranges{};       // fofpid only
  std::array<double, kMfVectorLen> mf_vector = {-0.5, 0.0, 0.5, -0.5, 0.0, 0.5,
                                                0.25, 0.5, 0.75};
  RuleBase rules = RuleBase::defaults();
  double u_max = 200.0;  // mg/min
  double dt = 0.01;      // min
  std::size_t memory_len = FracOperator::kDefaultMemory;
  bool anti_windup = true;

  void validate() const;
};

struct ControllerState {
  FracOperator frac_int, frac_der;  // fopid / fofpid
  double int_acc = 0.0;             // pid rectangular sum
  double prev_error = 0.0;
  double prev_u = 0.0;
  MfGeometry mf{};        // decoded once per reset
  OutputGrid out_grid{};  // centroid grid for mf.out, built once per reset
};

// Fresh state: empty operator histories, zero previous error and output.
ControllerState reset_controller(const ControllerConfig& cfg);

// One control step. Mutates st; returns the clamped infusion command.
// Throws NumericError if the raw law produces a non-finite value.
double control_step(const ControllerConfig& cfg, ControllerState& st,
                    double bis_measured, double bis_target);

// --- WOA search-space decoding ------------------------------------------

struct Interval {
  double lo = 0, hi = 0;
};

// Declared engineering bounds for the tunable parameters; recorded in every
// audit record. fofpid searches gain maxima at 4x the base-gain ranges.
struct ControllerBounds {
  Interval kp{0, 5}, ki{0, 2}, kd{0, 2};
  Interval kp_max{0, 20}, ki_max{0, 8}, kd_max{0, 8};
  Interval alpha{0.1, 1.5}, beta{0.1, 1.5};
  Interval mf_in{-0.98, 0.98}, mf_out{0.02, 0.98};
};

// Tunable-parameter count: pid 3, fopid 5, fofpid 14.
std::size_t agent_dim(ControllerVariant v);

// Affine map from [0,1]^dim agent coordinates into the declared bounds;
// MF coordinates are routed through the repair in mf_from_vector. Fixed
// fields (u_max, dt, rules, ...) are taken from `base`. Throws
// std::invalid_argument on a length mismatch.
ControllerConfig decode_agent(std::span<const double> unit_pos,
                              ControllerVariant variant,
                              const ControllerBounds& bounds,
                              const ControllerConfig& base);

}  // namespace doa
