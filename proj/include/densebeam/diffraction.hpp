#pragma once

#include <optional>
#include <string>
#include <vector>

#include "densebeam/effective_models.hpp"
#include "densebeam/pattern.hpp"
#include "densebeam/units.hpp"
#include "densebeam/wave_propagator.hpp"

namespace densebeam {

/// Far-zone phase 4 g0 cos^2(n k_L y) / (1 + V0 rho0 exp(-y^2/w_y^2))^2.
/// The outgoing field is psi_in(y) exp(-i phase).
double phase_profile(double y, const PhysicalParams& params, const RamanNathParams& rn);

/// P_q = J_q(tau)^2 for |q| <= q_max. Needs q_max >= ceil(|tau|) + 20 for the
/// truncated tail to be negligible; smaller q_max just truncates.
DiffractionPattern analytic_orders(double tau, int q_max);

/// Default truncation ceil(|tau|) + 30.
int default_q_max(double tau);

/// Default grid length in units of w_y for the phase-mask paths. The packet
/// edge then sits at exp(-8) of the peak amplitude.
inline constexpr double kMaskBoxFactor = 8.0;

/// Grid for the phase-mask paths: n_points over the smallest multiple of the
/// standing-wave period pi/(n k_L) that is >= box_factor * w_y.
Grid1D diffraction_grid(const PhysicalParams& params, int n_points, double box_factor);

/// Smallest power of two >= 4096 whose Nyquist limit on diffraction_grid
/// covers ceil(|tau|) + margin orders.
int resolving_grid_points(const PhysicalParams& params, double tau, double box_factor,
                          int margin = 8);

/// resolving_grid_points for the largest local tau across the packet: the
/// centre sees tau, the dilute wings 2 g0.
int mask_grid_points(const PhysicalParams& params, double box_factor);

/// Gaussian packet times exp(-i phase_profile), binned by momentum_spectrum
/// with k_unit = 2 n k_L. Independent of the Bessel expansion.
DiffractionPattern numeric_orders(const PhysicalParams& params, const RamanNathParams& rn,
                                  const Grid1D& grid, int q_max);

/// tan(alpha_q) = q n hbar k_L / (m v_g), q = -q_max .. q_max.
std::vector<double> diffraction_angles(const PhysicalParams& params, int q_max);

struct DensitySweepRow {
  double rho_0 = 0.0;
  std::optional<double> tau;
  std::optional<DiffractionPattern> pattern;
  std::string error;  // empty on success
};

/// Analytic pattern per density, in input order. Pole errors are recorded per
/// row rather than aborting.
std::vector<DensitySweepRow> density_sweep(const PhysicalParams& params,
                                           const std::vector<double>& densities, int q_max);

}  // namespace densebeam
