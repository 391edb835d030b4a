#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "densebeam/constants.hpp"
#include "densebeam/units.hpp"

namespace densebeam::testing {

inline constexpr double kLambda = 589e-7;  // cm
inline constexpr double kHbar = 1.054571817e-27;
inline constexpr double kC = 2.99792458e10;
inline constexpr double kPi = 3.14159265358979323846;

struct Reference {
  double g0 = 2.0;        // magnitude; the sign follows the detuning
  double v0_rho0 = 0.0;   // must share the sign of the detuning for rho0 >= 0
  double sign = 1.0;      // sign of Delta
  double w_y_lambdas = 50.0;
  double gamma = 2 * kPi * 9.8e6;
};

/// Sodium-like two-level atom in a 589 nm standing wave, 1 GHz detuning,
/// 100 m/s beam through a 10 um waist. Omega0 and rho0 are solved from the
/// requested g0 and V0 rho0 with formulas written out here, independently of
/// effective_models.
inline ParamValues reference_values(const Reference& r = {}) {
  const double k = 2 * kPi / kLambda;
  const double delta = r.sign * 2 * kPi * 1e9;
  ParamValues v;
  v.mass = 3.82e-23;
  v.dipole = 6.3e-18;
  v.omega_a = kC * k;
  v.omega_l = v.omega_a + delta;
  v.k_l = k;
  v.gamma = r.gamma;
  v.scattering_length = 2.75e-7;
  v.w_l = 1e-3;
  v.v_g = 1e4;
  v.w_y = r.w_y_lambdas * kLambda;
  // g0 = Omega^2 w_L sqrt(pi) / (16 Delta v_g)
  v.rabi_peak = std::sqrt(16.0 * r.g0 * std::abs(delta) * v.v_g / (v.w_l * std::sqrt(kPi)));
  // V0 = 4 pi d^2 / (3 hbar Delta); the detuning actually realised is
  // omega_l - omega_a, which differs from `delta` by rounding.
  const double delta_real = v.omega_l - v.omega_a;
  const double v0 = 4 * kPi * v.dipole * v.dipole / (3 * kHbar * delta_real);
  v.rho_0 = r.v0_rho0 / v0;
  return v;
}

inline PhysicalParams reference_params(const Reference& r = {}) {
  return PhysicalParams(reference_values(r));
}

/// Seeded generator for hand-rolled property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

/// Least-squares slope of log(y) against log(x).
template <class Xs, class Ys>
double loglog_slope(const Xs& xs, const Ys& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace densebeam::testing
