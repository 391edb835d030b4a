#include "densebeam/diffraction.hpp"

#include <cmath>
#include <sstream>

#include "densebeam/bessel.hpp"
#include "densebeam/constants.hpp"
#include "densebeam/errors.hpp"

namespace densebeam {

using constants::hbar;
using constants::pi;

double max_order_discrepancy(const DiffractionPattern& a, const DiffractionPattern& b) {
  const int q = std::min(a.q_max, b.q_max);
  double worst = 0.0;
  for (int i = -q; i <= q; ++i) {
    worst = std::max(worst, std::abs(a.probability(i) - b.probability(i)));
  }
  return worst;
}

double phase_profile(double y, const PhysicalParams& params, const RamanNathParams& rn) {
  const double rho = params.rho_0() * std::exp(-y * y / (params.w_y() * params.w_y()));
  const double den = 1.0 + rn.v0 * rho;
  if (std::abs(den) <= constants::pole_epsilon) {
    std::ostringstream msg;
    msg << "phase profile pole: 1 + V0 rho = " << den << " at y = " << y << " cm";
    throw PoleError(msg.str(), rho);
  }
  const double c = std::cos(effective_wavenumber(params) * y);
  return 4.0 * rn.g0 * c * c / (den * den);
}

DiffractionPattern analytic_orders(double tau, int q_max) {
  if (q_max < 0) throw ConfigError("q_max must be >= 0");
  const std::vector<double> j = bessel_j_sequence(tau, q_max);
  DiffractionPattern pattern(q_max);
  for (int q = 0; q <= q_max; ++q) {
    const double p = j[q] * j[q];
    pattern.probability(q) = p;
    pattern.probability(-q) = p;
  }
  pattern.tau = tau;
  return pattern;
}

int default_q_max(double tau) { return static_cast<int>(std::ceil(std::abs(tau))) + 30; }

Grid1D diffraction_grid(const PhysicalParams& params, int n_points, double box_factor) {
  if (!(box_factor > 0.0)) throw ConfigError("box factor must be > 0");
  return commensurate_grid(n_points, box_factor * params.w_y(), 2.0 * effective_wavenumber(params));
}

int resolving_grid_points(const PhysicalParams& params, double tau, double box_factor, int margin) {
  if (!std::isfinite(tau)) throw ConfigError("tau must be finite");
  // Probe grid only for its length; the length does not depend on n_points.
  const Grid1D probe = diffraction_grid(params, 16, box_factor);
  const double modes_per_order = probe.length() * effective_wavenumber(params) / constants::pi;
  const double needed = 2.0 * modes_per_order * (std::ceil(std::abs(tau)) + margin);
  int n = 4096;
  while (n < needed) {
    if (n > (1 << 26)) throw ConfigError("resolving grid would exceed 2^27 points");
    n *= 2;
  }
  return n;
}

int mask_grid_points(const PhysicalParams& params, double box_factor) {
  const RamanNathParams rn = raman_nath_params(params);
  return resolving_grid_points(params, std::max(std::abs(rn.tau), std::abs(2.0 * rn.g0)), box_factor);
}

DiffractionPattern numeric_orders(const PhysicalParams& params, const RamanNathParams& rn,
                                  const Grid1D& grid, int q_max) {
  WaveState state = sample_gaussian(grid, 1.0, params.w_y(), 1.0);
  for (int i = 0; i < grid.size(); ++i) {
    state.amplitude[i] *= std::polar(1.0, -phase_profile(grid.coordinate(i), params, rn));
  }
  return momentum_spectrum(state, 2.0 * effective_wavenumber(params), q_max);
}

std::vector<double> diffraction_angles(const PhysicalParams& params, int q_max) {
  if (q_max < 0) throw ConfigError("q_max must be >= 0");
  const double unit = params.harmonic() * hbar * params.k_l() / (params.mass() * params.v_g());
  std::vector<double> out(static_cast<std::size_t>(2 * q_max + 1));
  for (int q = -q_max; q <= q_max; ++q) out[q + q_max] = std::atan(q * unit);
  return out;
}

std::vector<DensitySweepRow> density_sweep(const PhysicalParams& params,
                                           const std::vector<double>& densities, int q_max) {
  std::vector<DensitySweepRow> rows;
  rows.reserve(densities.size());
  for (double rho : densities) {
    DensitySweepRow row;
    row.rho_0 = rho;
    try {
      const RamanNathParams rn = raman_nath_params(params.with("rho_0", rho));
      row.tau = rn.tau;
      row.pattern = analytic_orders(rn.tau, q_max);
      row.pattern->angles = diffraction_angles(params, q_max);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace densebeam
