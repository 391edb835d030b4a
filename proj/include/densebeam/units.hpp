#pragma once

#include <array>
#include <istream>
#include <map>
#include <string>
#include <string_view>

namespace densebeam {

// ---------------------------------------------------------------------------
// Unit tags and boundary conversion. Internally everything is Gaussian-CGS.
// ---------------------------------------------------------------------------

enum class Dimension {
  dimensionless,
  length,
  inverse_length,
  density,  // number per volume
  area,
  frequency,
  mass,
  dipole_moment,
  velocity,
};

enum class Unit {
  one,
  cm, m, nm, um,
  per_cm, per_m, per_nm,
  per_cm3, per_m3,
  cm2, m2,
  rad_per_s, hz,
  g, kg, amu,
  statc_cm, c_m, debye,
  cm_per_s, m_per_s,
};

Dimension dimension_of(Unit u);

/// Parses tags such as "nm", "cm^-3", "rad/s", "statC*cm". Throws ConfigError.
Unit parse_unit(std::string_view tag);
std::string_view unit_name(Unit u);

/// Converts between two tags of the same dimension. Throws DimensionMismatch
/// naming both tags otherwise.
double convert_units(double value, Unit from, Unit to);

enum class UnitSystem { si, cgs };

UnitSystem parse_unit_system(std::string_view tag);
std::string_view unit_system_name(UnitSystem s);

// ---------------------------------------------------------------------------
// Physical parameters
// ---------------------------------------------------------------------------

/// Raw field values in Gaussian-CGS, prior to validation.
struct ParamValues {
  double mass = 0.0;               // g
  double dipole = 0.0;             // statC cm
  double omega_a = 0.0;            // rad/s
  double gamma = 0.0;              // rad/s
  double scattering_length = 0.0;  // cm
  double omega_l = 0.0;            // rad/s
  double rabi_peak = 0.0;          // rad/s
  double k_l = 0.0;                // 1/cm
  double harmonic = 1.0;           // effective index multiplying k_l
  double w_l = 0.0;                // cm
  double v_g = 0.0;                // cm/s
  double rho_0 = 0.0;              // 1/cm^3
  double w_y = 0.0;                // cm
  double delta_shift = 0.0;        // rad/s
};

inline constexpr std::array<std::string_view, 14> param_field_names{
    "mass",     "dipole", "omega_a", "gamma", "scattering_length",
    "omega_l",  "rabi_peak", "k_l",  "harmonic", "w_l",
    "v_g",      "rho_0",  "w_y",     "delta_shift"};

bool is_param_field(std::string_view name);
Unit cgs_unit_of(std::string_view field);
Unit si_unit_of(std::string_view field);

double get_field(const ParamValues& v, std::string_view field);
void set_field(ParamValues& v, std::string_view field, double value);

/// Validated, immutable parameter set. Construction rejects non-finite values,
/// non-positive mass/dipole/omega_a/omega_l/k_l/harmonic/w_l/w_y/v_g and
/// negative gamma/rho_0/rabi_peak/scattering_length.
class PhysicalParams {
 public:
  explicit PhysicalParams(const ParamValues& values);

  const ParamValues& values() const noexcept { return v_; }

  double mass() const noexcept { return v_.mass; }
  double dipole() const noexcept { return v_.dipole; }
  double omega_a() const noexcept { return v_.omega_a; }
  double gamma() const noexcept { return v_.gamma; }
  double scattering_length() const noexcept { return v_.scattering_length; }
  double omega_l() const noexcept { return v_.omega_l; }
  double rabi_peak() const noexcept { return v_.rabi_peak; }
  double k_l() const noexcept { return v_.k_l; }
  double harmonic() const noexcept { return v_.harmonic; }
  double w_l() const noexcept { return v_.w_l; }
  double v_g() const noexcept { return v_.v_g; }
  double rho_0() const noexcept { return v_.rho_0; }
  double w_y() const noexcept { return v_.w_y; }
  double delta_shift() const noexcept { return v_.delta_shift; }

  /// Copy with one field replaced (by name), revalidated.
  PhysicalParams with(std::string_view field, double value) const;

 private:
  ParamValues v_;
};

/// Delta = omega_L - omega_a - delta. Sign is preserved.
double detuning(const PhysicalParams& p);

/// Effective standing-wave wavenumber n k_L.
inline double effective_wavenumber(const PhysicalParams& p) {
  return p.harmonic() * p.k_l();
}

// ---------------------------------------------------------------------------
// Parameter files: `key = value` lines, `#` comments, a `units = si|cgs` key.
// k_l defaults to omega_l / c, harmonic to 1, gamma/scattering_length/
// delta_shift to 0. Unknown keys are rejected with the line number.
// ---------------------------------------------------------------------------

struct ParamFile {
  UnitSystem units = UnitSystem::cgs;
  std::map<std::string, double> entries;  // as written, in `units`
};

ParamFile read_param_file(std::istream& in, const std::string& source_name);
ParamFile read_param_file(const std::string& path);

/// Converts the file entries (plus overrides, which win) to validated params.
PhysicalParams params_from_file(const ParamFile& file,
                                const std::map<std::string, double>& overrides = {});

/// Field values expressed in the requested unit system, in field order.
std::map<std::string, double> echo_params(const PhysicalParams& p, UnitSystem units);

}  // namespace densebeam
