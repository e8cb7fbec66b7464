#pragma once

// Two-input Mamdani inference producing normalized gain multipliers in
// [0, 1] from (error, error derivative). Each variable carries five
// triangular sets with shoulder ramps at the extremes; triangles touch at
// their neighbours' apexes, so the geometry is fully described by the five
// sorted centers. Defuzzification is a centroid over a fixed 201-point
// rectangular grid on [0, 1].

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace doa {

inline constexpr std::size_t kNumLabels = 5;  // NL NS Z PS PL
inline constexpr std::size_t kMfVectorLen = 9;
inline constexpr double kMfMinGap = 0.02;
inline constexpr std::size_t kCentroidPoints = 201;

// Fixed, documented input scaling: BIS error spans +-50 around the target,
// its derivative +-25 BIS/min; both are clamped into [-1, 1].
inline constexpr double kErrorScale = 50.0;
inline constexpr double kDerrorScale = 25.0;

std::string label_name(std::size_t index);             // "NL".."PL"
std::size_t label_from_name(const std::string& name);  // throws on unknown label

struct MembershipSet {
  std::array<double, kNumLabels> centers{};

  static MembershipSet input_default();   // -1 -0.5 0 0.5 1
  static MembershipSet output_default();  // 0 0.25 0.5 0.75 1
};

// Degrees for all five labels at x (x clamped into [centers0, centers4]).
std::array<double, kNumLabels> membership(const MembershipSet& set, double x);

// One consequent label index per (error label, derivative label) cell.
struct RuleTable {
  std::array<std::array<std::uint8_t, kNumLabels>, kNumLabels> cells{};
};

struct RuleBase {
  RuleTable kp, ki, kd;

  // Odd-symmetric default tables: mirroring both inputs mirrors the
  // consequent, which pins infer(0,0) = 0.5 and the antisymmetry property.
  static RuleBase defaults();
};

struct FuzzyGains {
  double kp_norm = 0.5, ki_norm = 0.5, kd_norm = 0.5;
};

// Output memberships tabulated over the centroid grid; constant for a given
// output geometry, so per-step inference only clips and aggregates.
struct OutputGrid {
  std::array<std::array<double, kNumLabels>, kCentroidPoints> mu{};
  static OutputGrid build(const MembershipSet& out);
};

// Mamdani min firing, max aggregation, centroid defuzzification.
FuzzyGains infer(double e_norm, double de_norm, const RuleBase& rules,
                 const MembershipSet& in_e, const MembershipSet& in_de,
                 const OutputGrid& out_grid);
FuzzyGains infer(double e_norm, double de_norm, const RuleBase& rules,
                 const MembershipSet& in_e, const MembershipSet& in_de,
                 const MembershipSet& out);

// The three optimizable set geometries: error input, derivative input and
// the output geometry shared by all three gains.
struct MfGeometry {
  MembershipSet in_e, in_de, out;
};

// Vector layout: 3 interior centers for in_e, in_de, out in that order.
// Input extremes are pinned at -1/+1, output extremes at 0/1. Interior
// centers are repaired (clamped, sorted, min gap kMfMinGap) rather than
// rejected, so any real vector decodes to a valid geometry.
MfGeometry mf_from_vector(std::span<const double> v);
std::array<double, kMfVectorLen> mf_to_vector(const MfGeometry& g);

}  // namespace doa
