#include "densebeam/effective_models.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "densebeam/constants.hpp"
#include "densebeam/errors.hpp"
#include "densebeam/medium_optics.hpp"

namespace densebeam {

using constants::hbar;
using constants::pi;

namespace {

double nonzero_detuning(const PhysicalParams& p) {
  const double delta = detuning(p);
  if (delta == 0.0) throw SingularDetuning("detuning is zero; adiabatic potentials undefined");
  return delta;
}

void guard_pole(double den, double density, const char* what) {
  if (std::abs(den) <= constants::pole_epsilon) {
    std::ostringstream msg;
    msg << what << " denominator vanishes at rho = " << density << " cm^-3";
    throw PoleError(msg.str(), density);
  }
}

}  // namespace

ModelKind parse_model_kind(std::string_view tag) {
  if (tag == "full") return ModelKind::full;
  if (tag == "single") return ModelKind::single_particle;
  if (tag == "gp") return ModelKind::gross_pitaevskii;
  if (tag == "wallis") return ModelKind::wallis;
  throw ConfigError("model must be one of full | single | gp | wallis, got '" +
                    std::string(tag) + "'");
}

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::full: return "full";
    case ModelKind::single_particle: return "single";
    case ModelKind::gross_pitaevskii: return "gp";
    case ModelKind::wallis: return "wallis";
  }
  return "?";
}

double characteristic_volume(const PhysicalParams& p) {
  const double delta = nonzero_detuning(p);
  return (4.0 * pi / (3.0 * hbar)) * p.dipole() * p.dipole() / delta;
}

double effective_potential(ModelKind kind, double rabi_sq, double density,
                           const PhysicalParams& p) {
  const double delta = nonzero_detuning(p);
  // Every kind reduces to this at zero density.
  const double single = hbar * rabi_sq / (4.0 * delta);
  switch (kind) {
    case ModelKind::single_particle:
      return single;
    case ModelKind::full: {
      const double den = 1.0 + characteristic_volume(p) * density;
      guard_pole(den, density, "full-model 1 + V0 rho");
      return single / (den * den);
    }
    case ModelKind::gross_pitaevskii: {
      const double d2 = p.dipole() * p.dipole();
      return (rabi_sq / delta) * (hbar / 4.0 - (2.0 * pi / 3.0) * (d2 / delta) * density);
    }
    case ModelKind::wallis: {
      const double den = 1.0 - (8.0 * pi / 3.0) * polarizability(p) * density;
      guard_pole(den, density, "wallis-model 1 - (8pi/3) alpha rho");
      return single / den;
    }
  }
  throw ConfigError("unknown model kind");
}

double raman_nath_tau(double g0, double v0, double rho0) {
  const double den = 1.0 + v0 * rho0;
  guard_pole(den, rho0, "Raman-Nath 1 + V0 rho0");
  return 2.0 * g0 / (den * den);
}

RamanNathParams raman_nath_params(const PhysicalParams& p) {
  const double delta = nonzero_detuning(p);
  RamanNathParams rn;
  rn.v0 = characteristic_volume(p);
  rn.g0 = p.rabi_peak() * p.rabi_peak() * p.w_l() * std::sqrt(pi) / (16.0 * delta * p.v_g());
  rn.tau = raman_nath_tau(rn.g0, rn.v0, p.rho_0());
  return rn;
}

SignificantDensity significant_density(const PhysicalParams& p) {
  SignificantDensity s;
  s.exact = 1.0 / std::abs(characteristic_volume(p));
  if (p.gamma() > 0.0) {
    const double k3 = p.k_l() * p.k_l() * p.k_l();
    s.estimate = std::abs(detuning(p)) / p.gamma() * k3 / pi;
  }
  return s;
}

}  // namespace densebeam
