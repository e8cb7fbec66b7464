#include "doa/pkpd.hpp"

#include <cmath>
#include <stdexcept>

#include "doa/errors.hpp"

namespace doa {

std::string to_string(Sex sex) { return sex == Sex::male ? "male" : "female"; }

Sex sex_from_string(const std::string& s) {
  if (s == "male") return Sex::male;
  if (s == "female") return Sex::female;
  throw std::invalid_argument("unknown sex '" + s + "' (expected male|female)");
}

void PdParams::validate() const {
  if (!(ke0 > 0)) throw std::invalid_argument("pd: ke0 must be > 0");
  if (!(ec50 > 0)) throw std::invalid_argument("pd: ec50 must be > 0");
  if (!(gamma >= 1)) throw std::invalid_argument("pd: gamma must be >= 1");
  if (!(bis0 > 0 && bis0 <= 100)) {
    throw std::invalid_argument("pd: bis0 must be in (0, 100]");
  }
}

void PatientProfile::validate() const {
  if (!(age_years > 0)) throw std::invalid_argument("patient: age must be > 0");
  if (!(weight_kg > 0)) throw std::invalid_argument("patient: weight must be > 0");
  if (!(height_cm > 0)) throw std::invalid_argument("patient: height must be > 0");
  pd.validate();
}

double compute_lbm(double weight_kg, double height_cm, Sex sex) {
  if (!(weight_kg > 0) || !(height_cm > 0)) {
    throw std::invalid_argument("compute_lbm: weight and height must be > 0");
  }
  const double wh2 = (weight_kg * weight_kg) / (height_cm * height_cm);
  const double lbm = (sex == Sex::male) ? 1.1 * weight_kg - 128.0 * wh2
                                        : 1.07 * weight_kg - 148.0 * wh2;
  if (!(lbm > 0)) {
    throw DegenerateProfileError("lbm: demographics give non-positive lean body mass");
  }
  return lbm;
}

PkCoefficients compute_pk(const PatientProfile& profile) {
  profile.validate();
  PkCoefficients c;
  c.lbm = compute_lbm(profile.weight_kg, profile.height_cm, profile.sex);
  c.v1 = 4.27;
  c.v2 = 18.9 - 0.391 * (profile.age_years - 53.0);
  c.v3 = 238.0;
  if (!(c.v2 > 0)) {
    throw DegenerateProfileError("v2: age " + std::to_string(profile.age_years) +
                                 " gives non-positive muscle compartment volume");
  }
  c.cl1 = 1.89 + 0.0456 * (profile.weight_kg - 77.0) +
          0.0264 * (profile.height_cm - 177.0) - 0.0681 * (c.lbm - 59.0);
  c.cl2 = 1.29 - 0.024 * (profile.age_years - 53.0);
  c.cl3 = 0.836;
  if (!(c.cl1 > 0)) throw DegenerateProfileError("cl1: non-positive central clearance");
  if (!(c.cl2 > 0)) throw DegenerateProfileError("cl2: non-positive muscle clearance");
  c.k10 = c.cl1 / c.v1;
  c.k12 = c.cl2 / c.v1;
  c.k13 = c.cl3 / c.v1;
  c.k21 = c.cl2 / c.v2;
  c.k31 = c.cl3 / c.v3;
  return c;
}

PlantDerivatives plant_derivatives(const PlantState& s, const PkCoefficients& c,
                                   const PdParams& pd, double u) {
  PlantDerivatives d;
  d.dx1 = -(c.k10 + c.k12 + c.k13) * s.x1 + c.k21 * s.x2 + c.k31 * s.x3 + u;
  d.dx2 = c.k12 * s.x1 - c.k21 * s.x2;
  d.dx3 = c.k13 * s.x1 - c.k31 * s.x3;
  const double cp = s.x1 / c.v1;
  d.dce = pd.ke0 * (cp - s.ce);
  return d;
}

namespace {

PlantState advance(const PlantState& s, const PlantDerivatives& d, double h) {
  PlantState r = s;
  r.x1 = s.x1 + h * d.dx1;
  r.x2 = s.x2 + h * d.dx2;
  r.x3 = s.x3 + h * d.dx3;
  r.ce = s.ce + h * d.dce;
  return r;
}

}  // namespace

PlantState step_plant(const PlantState& state, const PkCoefficients& c,
                      const PdParams& pd, double u, double dt,
                      double* clamp_mag) {
  if (!(dt > 0)) throw std::invalid_argument("step_plant: dt must be > 0");

  const PlantDerivatives k1 = plant_derivatives(state, c, pd, u);
  const PlantDerivatives k2 = plant_derivatives(advance(state, k1, dt / 2), c, pd, u);
  const PlantDerivatives k3 = plant_derivatives(advance(state, k2, dt / 2), c, pd, u);
  const PlantDerivatives k4 = plant_derivatives(advance(state, k3, dt), c, pd, u);

  PlantState next;
  next.x1 = state.x1 + dt / 6.0 * (k1.dx1 + 2 * k2.dx1 + 2 * k3.dx1 + k4.dx1);
  next.x2 = state.x2 + dt / 6.0 * (k1.dx2 + 2 * k2.dx2 + 2 * k3.dx2 + k4.dx2);
  next.x3 = state.x3 + dt / 6.0 * (k1.dx3 + 2 * k2.dx3 + 2 * k3.dx3 + k4.dx3);
  next.ce = state.ce + dt / 6.0 * (k1.dce + 2 * k2.dce + 2 * k3.dce + k4.dce);
  next.t = state.t + dt;

  if (!std::isfinite(next.x1) || !std::isfinite(next.x2) ||
      !std::isfinite(next.x3) || !std::isfinite(next.ce)) {
    throw NumericError("step_plant: non-finite state at t=" + std::to_string(state.t) +
                       " (x1=" + std::to_string(next.x1) + ", x2=" + std::to_string(next.x2) +
                       ", x3=" + std::to_string(next.x3) + ", ce=" + std::to_string(next.ce) + ")");
  }

  // RK4 can undershoot slightly near zero; clamp and report the magnitude.
  double clamp = 0.0;
  for (double* v : {&next.x1, &next.x2, &next.x3, &next.ce}) {
    if (*v < 0.0) {
      clamp = std::max(clamp, -*v);
      *v = 0.0;
    }
  }
  if (clamp_mag) *clamp_mag = clamp;
  return next;
}

double bis_of(double ce, const PdParams& pd) {
  const double c = ce > 0.0 ? ce : 0.0;
  const double cg = std::pow(c, pd.gamma);
  const double eg = std::pow(pd.ec50, pd.gamma);
  return pd.bis0 * (1.0 - cg / (cg + eg));
}

}  // namespace doa
