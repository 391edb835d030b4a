#pragma once

#include <optional>
#include <string_view>

#include "densebeam/units.hpp"

namespace densebeam {

/// Which optical potential drives the ground-state matter wave.
///   full    hbar |Omega|^2 / (4 Delta (1 + V0 rho)^2)   local-field result
///   single  hbar |Omega|^2 / (4 Delta)                  no dipole-dipole coupling
///   gp      (|Omega|^2/Delta) (hbar/4 - (2pi/3)(d^2/Delta) rho)   first order in rho
///   wallis  (hbar/4) |Omega|^2 / (Delta (1 - (8pi/3) alpha rho))
enum class ModelKind { full, single_particle, gross_pitaevskii, wallis };

ModelKind parse_model_kind(std::string_view tag);  // full | single | gp | wallis
std::string_view model_kind_name(ModelKind kind);

/// Scalars of the Raman-Nath beam splitter.
struct RamanNathParams {
  double v0 = 0.0;   // characteristic volume, cm^3
  double g0 = 0.0;   // dimensionless coupling
  double tau = 0.0;  // dimensionless effective interaction time
};

/// V0 = (4 pi / 3 hbar) d^2 / Delta. Throws SingularDetuning at Delta = 0.
double characteristic_volume(const PhysicalParams& p);

/// Optical potential energy (erg). `rabi_sq` is |Omega+|^2 in rad^2/s^2,
/// `density` the local ground-state density. gamma is taken as zero.
/// Throws PoleError (carrying the density) at a model denominator pole.
double effective_potential(ModelKind kind, double rabi_sq, double density,
                           const PhysicalParams& p);

/// g0 = Omega0^2 w_L sqrt(pi) / (16 Delta v_g), tau = 2 g0 / (1 + V0 rho0)^2.
RamanNathParams raman_nath_params(const PhysicalParams& p);

/// tau for a given coupling, characteristic volume and peak density.
double raman_nath_tau(double g0, double v0, double rho0);

struct SignificantDensity {
  double exact = 0.0;                 // 1/|V0|, where |V0 rho| = 1
  std::optional<double> estimate;     // (|Delta|/gamma) k_L^3 / pi, needs gamma > 0
};

SignificantDensity significant_density(const PhysicalParams& p);

}  // namespace densebeam
