#include "densebeam/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "densebeam/errors.hpp"
#include "densebeam/medium_optics.hpp"

namespace densebeam {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void check_step(double dt, double detuning, std::complex<double> drive, const BlochRates& r,
                double t) {
  const double fastest = std::max({std::abs(detuning), std::abs(drive), r.gamma_l, r.gamma_t});
  if (dt * fastest > 0.1) {
    std::ostringstream msg;
    msg << "Bloch step too large at t = " << t << " s: dt * max rate = " << dt * fastest
        << " > 0.1";
    throw ConfigError(msg.str());
  }
}

BlochState advance(const BlochState& s, const BlochDerivative& d, double h) {
  return {s.coherence + h * d.coherence, s.inversion + h * d.inversion, s.time + h};
}

}  // namespace

BlochDerivative bloch_rhs(const BlochState& state, std::complex<double> drive, double detuning,
                          const BlochRates& rates) {
  BlochDerivative d;
  d.coherence = (kI * detuning - rates.gamma_t) * state.coherence -
                0.5 * kI * drive * state.inversion;
  d.inversion = -rates.gamma_l * (1.0 + state.inversion) +
                2.0 * std::imag(std::conj(drive) * state.coherence);
  return d;
}

std::vector<BlochState> integrate(const BlochState& initial, const DriveFunction& drive,
                                  double detuning, const BlochRates& rates, double dt,
                                  int n_steps) {
  if (!(dt > 0.0)) throw ConfigError("Bloch dt must be > 0");
  if (n_steps < 1) throw ConfigError("Bloch n_steps must be >= 1");
  if (!drive) throw ConfigError("Bloch drive function is empty");
  if (rates.gamma_l < 0.0 || rates.gamma_t < 0.0) throw ConfigError("Bloch rates must be >= 0");

  std::vector<BlochState> traj;
  traj.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.push_back(initial);
  BlochState s = initial;
  for (int n = 0; n < n_steps; ++n) {
    const double t = initial.time + n * dt;
    const auto f0 = drive(t);
    const auto fh = drive(t + 0.5 * dt);
    const auto f1 = drive(t + dt);
    check_step(dt, detuning, f0, rates, t);
    check_step(dt, detuning, fh, rates, t + 0.5 * dt);
    check_step(dt, detuning, f1, rates, t + dt);

    const auto k1 = bloch_rhs(s, f0, detuning, rates);
    const auto k2 = bloch_rhs(advance(s, k1, 0.5 * dt), fh, detuning, rates);
    const auto k3 = bloch_rhs(advance(s, k2, 0.5 * dt), fh, detuning, rates);
    const auto k4 = bloch_rhs(advance(s, k3, dt), f1, detuning, rates);
    s.coherence += dt / 6.0 * (k1.coherence + 2.0 * k2.coherence + 2.0 * k3.coherence + k4.coherence);
    s.inversion += dt / 6.0 * (k1.inversion + 2.0 * k2.inversion + 2.0 * k3.inversion + k4.inversion);
    s.time = initial.time + (n + 1) * dt;
    if (!std::isfinite(s.inversion) || !std::isfinite(std::abs(s.coherence))) {
      throw NumericalBlowup("Bloch state became non-finite at t = " + std::to_string(s.time));
    }
    traj.push_back(s);
  }
  return traj;
}

BlochState steady_state(std::complex<double> drive, double detuning, const BlochRates& rates) {
  if (!(rates.gamma_l > 0.0) || !(rates.gamma_t > 0.0)) {
    throw ConfigError("steady state is unique only with gamma_l > 0 and gamma_t > 0");
  }
  const double lorentz = rates.gamma_t / (detuning * detuning + rates.gamma_t * rates.gamma_t);
  BlochState s;
  s.inversion = -1.0 / (1.0 + std::norm(drive) * lorentz / rates.gamma_l);
  s.coherence = 0.5 * drive * s.inversion / std::complex<double>(detuning, rates.gamma_t);
  return s;
}

double adiabatic_excited_fraction(std::complex<double> rabi, const PhysicalParams& params,
                                  double density) {
  const double dl = local_detuning(params, density);
  const std::complex<double> den(dl, 0.5 * params.gamma());
  if (std::abs(den) == 0.0) {
    throw SingularDetuning("adiabatic excited fraction: local detuning and gamma both vanish");
  }
  return std::norm(rabi / (2.0 * den));
}

std::complex<double> local_drive(std::complex<double> rabi_mac, const PhysicalParams& params,
                                 double density, bool corrected) {
  if (!corrected) return rabi_mac;
  const double chi = susceptibility(polarizability(params), density);
  return local_field(rabi_mac, polarization(chi, rabi_mac));
}

}  // namespace densebeam
