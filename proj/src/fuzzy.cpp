#include "doa/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace doa {

namespace {

constexpr std::array<const char*, kNumLabels> kLabelNames = {"NL", "NS", "Z", "PS", "PL"};

double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

}  // namespace

std::string label_name(std::size_t index) {
  if (index >= kNumLabels) throw std::invalid_argument("label index out of range");
  return kLabelNames[index];
}

std::size_t label_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (name == kLabelNames[i]) return i;
  }
  throw std::invalid_argument("unknown linguistic label '" + name + "'");
}

MembershipSet MembershipSet::input_default() {
  return MembershipSet{{-1.0, -0.5, 0.0, 0.5, 1.0}};
}

MembershipSet MembershipSet::output_default() {
  return MembershipSet{{0.0, 0.25, 0.5, 0.75, 1.0}};
}

std::array<double, kNumLabels> membership(const MembershipSet& set, double x) {
  const auto& c = set.centers;
  x = clamp(x, c[0], c[4]);

  std::array<double, kNumLabels> mu{};
  // NL shoulder: flat left of c0, ramp down to c1.
  if (x <= c[0]) {
    mu[0] = 1.0;
  } else if (x < c[1]) {
    mu[0] = (c[1] - x) / (c[1] - c[0]);
  }
  // Interior triangles span the two neighbouring apexes.
  for (std::size_t i = 1; i <= 3; ++i) {
    const double lo = c[i - 1], mid = c[i], hi = c[i + 1];
    if (x > lo && x < hi) {
      mu[i] = (x <= mid) ? (x - lo) / (mid - lo) : (hi - x) / (hi - mid);
    }
  }
  // PL shoulder.
  if (x >= c[4]) {
    mu[4] = 1.0;
  } else if (x > c[3]) {
    mu[4] = (x - c[3]) / (c[4] - c[3]);
  }
  return mu;
}

namespace {

// cell = clamp(2 + t, 0, 4) with t odd in (a, b) keeps every table
// odd-symmetric: cells[4-i][4-j] == 4 - cells[i][j].
RuleTable make_table(int which) {
  RuleTable t;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    for (std::size_t j = 0; j < kNumLabels; ++j) {
      const double a = static_cast<double>(i) - 2.0;
      const double b = static_cast<double>(j) - 2.0;
      long long v = 0;
      switch (which) {
        case 0: v = std::llround((2.0 * a + b) / 2.0); break;  // kp: error-weighted
        case 1: v = std::llround(a); break;                    // ki: error only
        case 2: {
          // kd magnitude tracks the larger of |e| and |de|, signed by the
          // error: strong braking while descending toward target, released
          // when the patient is too deep (the pump cannot remove drug).
          const double sign = a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0);
          v = std::llround(sign * std::max(std::abs(a), std::abs(b)));
          break;
        }
      }
      v = std::clamp(v + 2, 0LL, 4LL);
      t.cells[i][j] = static_cast<std::uint8_t>(v);
    }
  }
  return t;
}

double centroid(const std::array<double, kNumLabels>& levels,
                const std::array<std::array<double, kNumLabels>, kCentroidPoints>& grid_mu) {
  // Only fired labels contribute to the max; typically 2-3 of 5.
  std::array<std::size_t, kNumLabels> fired{};
  std::size_t n_fired = 0;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    if (levels[l] > 0.0) fired[n_fired++] = l;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < kCentroidPoints; ++k) {
    const double z = static_cast<double>(k) / static_cast<double>(kCentroidPoints - 1);
    double mu = 0.0;
    for (std::size_t f = 0; f < n_fired; ++f) {
      const std::size_t l = fired[f];
      mu = std::max(mu, std::min(levels[l], grid_mu[k][l]));
    }
    num += z * mu;
    den += mu;
  }
  return den > 0.0 ? num / den : 0.5;
}

}  // namespace

RuleBase RuleBase::defaults() {
  RuleBase rb;
  rb.kp = make_table(0);
  rb.ki = make_table(1);
  rb.kd = make_table(2);
  return rb;
}

OutputGrid OutputGrid::build(const MembershipSet& out) {
  OutputGrid g;
  for (std::size_t k = 0; k < kCentroidPoints; ++k) {
    const double z = static_cast<double>(k) / static_cast<double>(kCentroidPoints - 1);
    g.mu[k] = membership(out, z);
  }
  return g;
}

FuzzyGains infer(double e_norm, double de_norm, const RuleBase& rules,
                 const MembershipSet& in_e, const MembershipSet& in_de,
                 const OutputGrid& out_grid) {
  const auto mu_e = membership(in_e, e_norm);
  const auto mu_de = membership(in_de, de_norm);

  // Aggregate firing strengths per consequent label (max over rules).
  std::array<double, kNumLabels> agg_kp{}, agg_ki{}, agg_kd{};
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (mu_e[i] == 0.0) continue;
    for (std::size_t j = 0; j < kNumLabels; ++j) {
      const double s = std::min(mu_e[i], mu_de[j]);
      if (s == 0.0) continue;
      auto up = [&](std::array<double, kNumLabels>& agg, const RuleTable& t) {
        double& cell = agg[t.cells[i][j]];
        cell = std::max(cell, s);
      };
      up(agg_kp, rules.kp);
      up(agg_ki, rules.ki);
      up(agg_kd, rules.kd);
    }
  }

  FuzzyGains g;
  g.kp_norm = centroid(agg_kp, out_grid.mu);
  g.ki_norm = centroid(agg_ki, out_grid.mu);
  g.kd_norm = centroid(agg_kd, out_grid.mu);
  return g;
}

FuzzyGains infer(double e_norm, double de_norm, const RuleBase& rules,
                 const MembershipSet& in_e, const MembershipSet& in_de,
                 const MembershipSet& out) {
  return infer(e_norm, de_norm, rules, in_e, in_de, OutputGrid::build(out));
}

namespace {

// Clamp into the domain, sort, then enforce the minimum gap with a forward
// and a backward sweep. The domain is wide enough (>= 4 gaps) that the
// result is always strictly increasing.
MembershipSet repair_set(double lo, double hi, double a, double b, double c) {
  std::array<double, 3> v = {clamp(a, lo, hi), clamp(b, lo, hi), clamp(c, lo, hi)};
  std::sort(v.begin(), v.end());
  v[0] = std::max(v[0], lo + kMfMinGap);
  v[1] = std::max(v[1], v[0] + kMfMinGap);
  v[2] = std::max(v[2], v[1] + kMfMinGap);
  v[2] = std::min(v[2], hi - kMfMinGap);
  v[1] = std::min(v[1], v[2] - kMfMinGap);
  v[0] = std::min(v[0], v[1] - kMfMinGap);
  return MembershipSet{{lo, v[0], v[1], v[2], hi}};
}

}  // namespace

MfGeometry mf_from_vector(std::span<const double> v) {
  if (v.size() != kMfVectorLen) {
    throw std::invalid_argument("mf_from_vector: expected 9 values, got " +
                                std::to_string(v.size()));
  }
  MfGeometry g;
  g.in_e = repair_set(-1.0, 1.0, v[0], v[1], v[2]);
  g.in_de = repair_set(-1.0, 1.0, v[3], v[4], v[5]);
  g.out = repair_set(0.0, 1.0, v[6], v[7], v[8]);
  return g;
}

std::array<double, kMfVectorLen> mf_to_vector(const MfGeometry& g) {
  return {g.in_e.centers[1],  g.in_e.centers[2],  g.in_e.centers[3],
          g.in_de.centers[1], g.in_de.centers[2], g.in_de.centers[3],
          g.out.centers[1],   g.out.centers[2],   g.out.centers[3]};
}

}  // namespace doa
