#include "doa/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doa/errors.hpp"

namespace doa {

std::string to_string(ControllerVariant v) {
  switch (v) {
    case ControllerVariant::pid: return "pid";
    case ControllerVariant::fopid: return "fopid";
    case ControllerVariant::fofpid: return "fofpid";
  }
  return "pid";
}

ControllerVariant variant_from_string(const std::string& s) {
  if (s == "pid") return ControllerVariant::pid;
  if (s == "fopid") return ControllerVariant::fopid;
  if (s == "fofpid") return ControllerVariant::fofpid;
  throw std::invalid_argument("unknown controller variant '" + s +
                              "' (expected pid|fopid|fofpid)");
}

void ControllerConfig::validate() const {
  if (kp < 0 || ki < 0 || kd < 0) {
    throw std::invalid_argument("controller: gains must be >= 0");
  }
  if (variant != ControllerVariant::pid) {
    if (!(alpha > 0 && alpha < 2)) throw std::invalid_argument("controller: alpha must be in (0, 2)");
    if (!(beta > 0 && beta < 2)) throw std::invalid_argument("controller: beta must be in (0, 2)");
  }
  if (variant == ControllerVariant::fofpid) {
    if (gain_ranges.kp_max < 0 || gain_ranges.ki_max < 0 || gain_ranges.kd_max < 0) {
      throw std::invalid_argument("controller: gain ranges must be >= 0");
    }
  }
  if (!(u_max > 0)) throw std::invalid_argument("controller: u_max must be > 0");
  if (!(dt > 0)) throw std::invalid_argument("controller: dt must be > 0");
  if (memory_len < 1) throw std::invalid_argument("controller: memory_len must be >= 1");
}

ControllerState reset_controller(const ControllerConfig& cfg) {
  cfg.validate();
  ControllerState st;
  if (cfg.variant != ControllerVariant::pid) {
    st.frac_int = FracOperator(FracKind::integral, cfg.alpha, cfg.dt, cfg.memory_len);
    st.frac_der = FracOperator(FracKind::derivative, cfg.beta, cfg.dt, cfg.memory_len);
  }
  if (cfg.variant == ControllerVariant::fofpid) {
    st.mf = mf_from_vector(cfg.mf_vector);
    st.out_grid = OutputGrid::build(st.mf.out);
  }
  return st;
}

namespace {

double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

}  // namespace

double control_step(const ControllerConfig& cfg, ControllerState& st,
                    double bis_measured, double bis_target) {
  const double e = bis_measured - bis_target;

  double kp = cfg.kp, ki = cfg.ki, kd = cfg.kd;
  if (cfg.variant == ControllerVariant::fofpid) {
    const double de = (e - st.prev_error) / cfg.dt;
    const double e_norm = clamp(e / kErrorScale, -1.0, 1.0);
    const double de_norm = clamp(de / kDerrorScale, -1.0, 1.0);
    const FuzzyGains g = infer(e_norm, de_norm, cfg.rules, st.mf.in_e, st.mf.in_de, st.out_grid);
    kp = g.kp_norm * cfg.gain_ranges.kp_max;
    ki = g.ki_norm * cfg.gain_ranges.ki_max;
    kd = g.kd_norm * cfg.gain_ranges.kd_max;
  }

  double d_term, i_candidate;
  if (cfg.variant == ControllerVariant::pid) {
    d_term = (e - st.prev_error) / cfg.dt;
    i_candidate = st.int_acc + e * cfg.dt;
  } else {
    d_term = st.frac_der.apply(e);
    i_candidate = st.frac_int.preview(e);
  }

  const double u_candidate = kp * e + ki * i_candidate + kd * d_term;

  // Conditional integration: while the command saturates in the same
  // direction the error is pushing, the integral history stays put.
  const bool adverse = (u_candidate > cfg.u_max && e > 0.0) ||
                       (u_candidate < 0.0 && e < 0.0);
  double i_term;
  if (cfg.anti_windup && adverse) {
    i_term = (cfg.variant == ControllerVariant::pid) ? st.int_acc : st.frac_int.held();
  } else {
    i_term = i_candidate;
    if (cfg.variant == ControllerVariant::pid) {
      st.int_acc = i_candidate;
    } else {
      st.frac_int.push(e, i_candidate);
    }
  }

  const double u_raw = kp * e + ki * i_term + kd * d_term;
  if (!std::isfinite(u_raw)) {
    throw NumericError("control_step: non-finite command (e=" + std::to_string(e) + ")");
  }

  st.prev_error = e;
  const double u = clamp(u_raw, 0.0, cfg.u_max);
  st.prev_u = u;
  return u;
}

std::size_t agent_dim(ControllerVariant v) {
  switch (v) {
    case ControllerVariant::pid: return 3;
    case ControllerVariant::fopid: return 5;
    case ControllerVariant::fofpid: return 5 + kMfVectorLen;
  }
  return 0;
}

namespace {

double affine(double unit, const Interval& iv) {
  return iv.lo + unit * (iv.hi - iv.lo);
}

}  // namespace

ControllerConfig decode_agent(std::span<const double> unit_pos,
                              ControllerVariant variant,
                              const ControllerBounds& bounds,
                              const ControllerConfig& base) {
  if (unit_pos.size() != agent_dim(variant)) {
    throw std::invalid_argument("decode_agent: expected " +
                                std::to_string(agent_dim(variant)) + " coordinates for " +
                                to_string(variant) + ", got " + std::to_string(unit_pos.size()));
  }
  ControllerConfig cfg = base;
  cfg.variant = variant;
  switch (variant) {
    case ControllerVariant::pid:
      cfg.kp = affine(unit_pos[0], bounds.kp);
      cfg.ki = affine(unit_pos[1], bounds.ki);
      cfg.kd = affine(unit_pos[2], bounds.kd);
      cfg.alpha = 1.0;
      cfg.beta = 1.0;
      break;
    case ControllerVariant::fopid:
      cfg.kp = affine(unit_pos[0], bounds.kp);
      cfg.ki = affine(unit_pos[1], bounds.ki);
      cfg.kd = affine(unit_pos[2], bounds.kd);
      cfg.alpha = affine(unit_pos[3], bounds.alpha);
      cfg.beta = affine(unit_pos[4], bounds.beta);
      break;
    case ControllerVariant::fofpid: {
      cfg.gain_ranges.kp_max = affine(unit_pos[0], bounds.kp_max);
      cfg.gain_ranges.ki_max = affine(unit_pos[1], bounds.ki_max);
      cfg.gain_ranges.kd_max = affine(unit_pos[2], bounds.kd_max);
      cfg.alpha = affine(unit_pos[3], bounds.alpha);
      cfg.beta = affine(unit_pos[4], bounds.beta);
      std::array<double, kMfVectorLen> raw{};
      for (std::size_t i = 0; i < kMfVectorLen; ++i) {
        const Interval& iv = (i < 6) ? bounds.mf_in : bounds.mf_out;
        raw[i] = affine(unit_pos[5 + i], iv);
      }
      cfg.mf_vector = mf_to_vector(mf_from_vector(raw));
      break;
    }
  }
  return cfg;
}

}  // namespace doa
