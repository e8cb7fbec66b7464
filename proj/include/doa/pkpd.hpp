#pragma once

// Three-compartment propofol pharmacokinetics plus first-order effect-site
// pharmacodynamics with a sigmoid BIS response. All coefficients are derived
// from patient demographics; units are minutes, mg and mg/L throughout.

#include <string>

namespace doa {

enum class Sex { male, female };

std::string to_string(Sex sex);
Sex sex_from_string(const std::string& s);

// Effect-site / dose-response parameters. The shipped defaults are
// literature-style nominal values, not fitted to any particular study.
struct PdParams {
  double ke0 = 0.456;   // plasma -> effect-site rate, 1/min
  double ec50 = 2.65;   // half-effect concentration, mg/L
  double gamma = 2.0;   // Hill exponent, dimensionless, >= 1
  double bis0 = 100.0;  // awake baseline BIS

  void validate() const;  // throws std::invalid_argument
};

struct PatientProfile {
  int id = 0;
  double age_years = 0.0;
  double weight_kg = 0.0;
  double height_cm = 0.0;
  Sex sex = Sex::male;
  PdParams pd{};

  void validate() const;  // throws on non-positive demographics
};

// Volumes, clearances and the transfer rate constants derived from them.
struct PkCoefficients {
  double v1 = 0, v2 = 0, v3 = 0;        // L
  double cl1 = 0, cl2 = 0, cl3 = 0;     // L/min
  double k10 = 0, k12 = 0, k13 = 0;     // 1/min
  double k21 = 0, k31 = 0;              // 1/min
  double lbm = 0;                       // kg
};

// Compartment masses, effect-site concentration and simulation clock.
struct PlantState {
  double x1 = 0, x2 = 0, x3 = 0;  // mg
  double ce = 0;                  // mg/L
  double t = 0;                   // min
};

struct PlantDerivatives {
  double dx1 = 0, dx2 = 0, dx3 = 0, dce = 0;
};

// Lean body mass, sex-specific. Throws std::invalid_argument on
// non-positive inputs and DegenerateProfileError on a non-positive result.
double compute_lbm(double weight_kg, double height_cm, Sex sex);

// Full coefficient set for one patient. Throws DegenerateProfileError
// naming the offending field when a volume or clearance is non-positive.
PkCoefficients compute_pk(const PatientProfile& profile);

// Right-hand side of the compartment and effect-site ODEs. Pure.
PlantDerivatives plant_derivatives(const PlantState& state,
                                   const PkCoefficients& coeffs,
                                   const PdParams& pd, double u);

// One classical RK4 step with the infusion rate held constant. Masses and
// effect-site concentration are clamped at zero afterwards; if clamp_mag is
// given it receives the largest clamp applied. Throws NumericError when the
// step produces a non-finite state.
PlantState step_plant(const PlantState& state, const PkCoefficients& coeffs,
                      const PdParams& pd, double u, double dt,
                      double* clamp_mag = nullptr);

// Sigmoid BIS response, strictly decreasing in ce, range (0, bis0].
double bis_of(double ce, const PdParams& pd);

}  // namespace doa
