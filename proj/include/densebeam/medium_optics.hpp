#pragma once

#include <complex>

#include "densebeam/units.hpp"

namespace densebeam {

/// Density-dependent optical response of the gas, evaluated at one density.
struct MediumResponse {
  double alpha = 0.0;           // cm^3
  double chi = 0.0;             // dimensionless
  double n_squared = 1.0;       // dimensionless
  double local_detuning = 0.0;  // rad/s
  double density = 0.0;         // 1/cm^3
};

/// alpha = -d^2 / (hbar Delta). Throws SingularDetuning at Delta = 0.
double polarizability(const PhysicalParams& p);

/// Lorentz-Lorenz susceptibility alpha rho / (1 - (4 pi/3) alpha rho).
/// Throws PoleError when the denominator is within pole_epsilon of zero.
double susceptibility(double alpha, double density);

/// Clausius-Mossotti n^2 = (1 + (8 pi/3) alpha rho) / (1 - (4 pi/3) alpha rho).
double refractive_index_sq(double alpha, double density);

/// Delta_l = Delta + (4 pi / 3 hbar) d^2 rho.
double local_detuning(const PhysicalParams& p, double density);

/// E_loc = E_mac + (4 pi / 3) P on positive-frequency amplitudes.
std::complex<double> local_field(std::complex<double> e_mac,
                                 std::complex<double> polarization);

/// P+ = chi E_mac+.
std::complex<double> polarization(double chi, std::complex<double> e_mac);

/// Full bundle at `density`.
MediumResponse evaluate_medium(const PhysicalParams& p, double density);

/// Lower bound (3/8) s / (a_s k_a) on U_d / U_g, with k_a = omega_a / c.
/// Requires saturation > 0 and a_s > 0 (ConfigError otherwise).
double contact_interaction_bound(double saturation, const PhysicalParams& p);

/// True when the bound exceeds `threshold`, i.e. s-wave collisions are negligible.
bool contact_interaction_negligible(double bound, double threshold = 10.0);

/// |Delta_l| / gamma at `density`; +inf when gamma = 0.
double adiabatic_validity(const PhysicalParams& p, double density);

/// ratio > threshold.
bool adiabatic_valid(double ratio, double threshold = 10.0);

}  // namespace densebeam
