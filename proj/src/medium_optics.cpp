#include "densebeam/medium_optics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "densebeam/constants.hpp"
#include "densebeam/errors.hpp"

namespace densebeam {

using constants::hbar;
using constants::pi;

namespace {

double clausius_mossotti_denominator(double alpha, double density) {
  const double den = 1.0 - (4.0 * pi / 3.0) * alpha * density;
  if (std::abs(den) <= constants::pole_epsilon) {
    std::ostringstream msg;
    msg << "Clausius-Mossotti pole: 1 - (4pi/3) alpha rho = " << den
        << " at rho = " << density << " cm^-3";
    throw PoleError(msg.str(), density);
  }
  return den;
}

}  // namespace

double polarizability(const PhysicalParams& p) {
  const double delta = detuning(p);
  if (delta == 0.0) throw SingularDetuning("polarizability undefined at zero detuning");
  return -p.dipole() * p.dipole() / (hbar * delta);
}

double susceptibility(double alpha, double density) {
  const double den = clausius_mossotti_denominator(alpha, density);
  return alpha * density / den + 0.0;  // no -0 at zero density
}

double refractive_index_sq(double alpha, double density) {
  const double den = clausius_mossotti_denominator(alpha, density);
  return (1.0 + (8.0 * pi / 3.0) * alpha * density) / den;
}

double local_detuning(const PhysicalParams& p, double density) {
  return detuning(p) + (4.0 * pi / (3.0 * hbar)) * p.dipole() * p.dipole() * density;
}

std::complex<double> local_field(std::complex<double> e_mac,
                                 std::complex<double> polarization) {
  return e_mac + (4.0 * pi / 3.0) * polarization;
}

std::complex<double> polarization(double chi, std::complex<double> e_mac) {
  return chi * e_mac;
}

MediumResponse evaluate_medium(const PhysicalParams& p, double density) {
  MediumResponse r;
  r.density = density;
  r.alpha = polarizability(p);
  r.chi = susceptibility(r.alpha, density);
  r.n_squared = refractive_index_sq(r.alpha, density);
  r.local_detuning = local_detuning(p, density);
  return r;
}

double contact_interaction_bound(double saturation, const PhysicalParams& p) {
  if (!(saturation > 0.0)) throw ConfigError("saturation parameter must be > 0");
  if (!(p.scattering_length() > 0.0)) {
    throw ConfigError("contact-interaction bound needs scattering_length > 0");
  }
  const double k_a = p.omega_a() / constants::c_light;
  return 3.0 / 8.0 * saturation / (p.scattering_length() * k_a);
}

bool contact_interaction_negligible(double bound, double threshold) {
  return bound > threshold;
}

double adiabatic_validity(const PhysicalParams& p, double density) {
  const double dl = std::abs(local_detuning(p, density));
  if (p.gamma() == 0.0) return std::numeric_limits<double>::infinity();
  return dl / p.gamma();
}

bool adiabatic_valid(double ratio, double threshold) { return ratio > threshold; }

}  // namespace densebeam
