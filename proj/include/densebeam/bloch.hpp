#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "densebeam/units.hpp"

namespace densebeam {

/// Coherence R+ and inversion W (excited minus ground, -1 in the ground state).
struct BlochState {
  std::complex<double> coherence{0.0, 0.0};
  double inversion = -1.0;
  double time = 0.0;  // s
};

/// Phenomenological longitudinal (gamma_l) and transverse (gamma_t) rates, rad/s.
struct BlochRates {
  double gamma_l = 0.0;
  double gamma_t = 0.0;
};

struct BlochDerivative {
  std::complex<double> coherence;
  double inversion = 0.0;
};

/// Optical Bloch right-hand side with drive = 2 d E_loc+ / hbar:
///   dR/dt = (i Delta - gamma_t) R - (i/2) drive W
///   dW/dt = -gamma_l (1 + W) + 2 Im[conj(drive) R]
/// The last term is (2i/hbar)[d E+ R- - d R+ E-] written with the drive.
BlochDerivative bloch_rhs(const BlochState& state, std::complex<double> drive, double detuning,
                          const BlochRates& rates);

using DriveFunction = std::function<std::complex<double>(double)>;

/// Classic RK4 from `initial`; returns n_steps + 1 states including the first.
/// Rejects dt max(|Delta|, |drive|, gamma_l, gamma_t) > 0.1 with ConfigError
/// (drive checked at every stage time).
std::vector<BlochState> integrate(const BlochState& initial, const DriveFunction& drive,
                                  double detuning, const BlochRates& rates, double dt,
                                  int n_steps);

/// Fixed point of the damped equations:
///   W = -1 / (1 + |drive|^2 gamma_t / (gamma_l (Delta^2 + gamma_t^2)))
///   R = (drive / 2) W / (Delta + i gamma_t)
/// Requires gamma_l > 0 and gamma_t > 0.
BlochState steady_state(std::complex<double> drive, double detuning, const BlochRates& rates);

/// |Omega / (2 (Delta_l + i gamma/2))|^2 at `density`.
double adiabatic_excited_fraction(std::complex<double> rabi, const PhysicalParams& params,
                                  double density);

/// Drive seen by the atoms for a macroscopic Rabi amplitude. With
/// `corrected`, applies the Lorentz-Lorenz factor 1 + (4 pi/3) chi(density).
std::complex<double> local_drive(std::complex<double> rabi_mac, const PhysicalParams& params,
                                 double density, bool corrected);

}  // namespace densebeam
