#include "densebeam/units.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "densebeam/constants.hpp"
#include "densebeam/errors.hpp"

namespace densebeam {

namespace {

struct UnitInfo {
  Unit unit;
  std::string_view name;
  Dimension dim;
  double to_cgs;  // multiply to get the CGS base unit of the dimension
};

constexpr double kAmuGrams = 1.66053906660e-24;
constexpr double kDebye = 1e-18;  // statC cm

// clang-format off
constexpr std::array<UnitInfo, 22> kUnits{{
    {Unit::one,       "1",        Dimension::dimensionless, 1.0},
    {Unit::cm,        "cm",       Dimension::length,        1.0},
    {Unit::m,         "m",        Dimension::length,        1e2},
    {Unit::nm,        "nm",       Dimension::length,        1e-7},
    {Unit::um,        "um",       Dimension::length,        1e-4},
    {Unit::per_cm,    "cm^-1",    Dimension::inverse_length, 1.0},
    {Unit::per_m,     "m^-1",     Dimension::inverse_length, 1e-2},
    {Unit::per_nm,    "nm^-1",    Dimension::inverse_length, 1e7},
    {Unit::per_cm3,   "cm^-3",    Dimension::density,       1.0},
    {Unit::per_m3,    "m^-3",     Dimension::density,       1e-6},
    {Unit::cm2,       "cm^2",     Dimension::area,          1.0},
    {Unit::m2,        "m^2",      Dimension::area,          1e4},
    {Unit::rad_per_s, "rad/s",    Dimension::frequency,     1.0},
    {Unit::hz,        "Hz",       Dimension::frequency,     2.0 * constants::pi},
    {Unit::g,         "g",        Dimension::mass,          1.0},
    {Unit::kg,        "kg",       Dimension::mass,          1e3},
    {Unit::amu,       "amu",      Dimension::mass,          kAmuGrams},
    {Unit::statc_cm,  "statC*cm", Dimension::dipole_moment, 1.0},
    {Unit::c_m,       "C*m",      Dimension::dipole_moment, constants::statcoulomb_per_coulomb * 1e2},
    {Unit::debye,     "D",        Dimension::dipole_moment, kDebye},
    {Unit::cm_per_s,  "cm/s",     Dimension::velocity,      1.0},
    {Unit::m_per_s,   "m/s",      Dimension::velocity,      1e2},
}};
// clang-format on

const UnitInfo& info(Unit u) {
  for (const auto& i : kUnits) {
    if (i.unit == u) return i;
  }
  throw ConfigError("unknown unit enumerator");
}

struct FieldUnits {
  std::string_view field;
  Unit cgs;
  Unit si;
};

constexpr std::array<FieldUnits, 14> kFieldUnits{{
    {"mass", Unit::g, Unit::kg},
    {"dipole", Unit::statc_cm, Unit::c_m},
    {"omega_a", Unit::rad_per_s, Unit::rad_per_s},
    {"gamma", Unit::rad_per_s, Unit::rad_per_s},
    {"scattering_length", Unit::cm, Unit::m},
    {"omega_l", Unit::rad_per_s, Unit::rad_per_s},
    {"rabi_peak", Unit::rad_per_s, Unit::rad_per_s},
    {"k_l", Unit::per_cm, Unit::per_m},
    {"harmonic", Unit::one, Unit::one},
    {"w_l", Unit::cm, Unit::m},
    {"v_g", Unit::cm_per_s, Unit::m_per_s},
    {"rho_0", Unit::per_cm3, Unit::per_m3},
    {"w_y", Unit::cm, Unit::m},
    {"delta_shift", Unit::rad_per_s, Unit::rad_per_s},
}};

const FieldUnits& field_units(std::string_view field) {
  for (const auto& f : kFieldUnits) {
    if (f.field == field) return f;
  }
  throw ConfigError("unknown parameter '" + std::string(field) + "'");
}

template <class Values>
auto field_ptr(Values& v, std::string_view field) -> decltype(&v.mass) {
  if (field == "mass") return &v.mass;
  if (field == "dipole") return &v.dipole;
  if (field == "omega_a") return &v.omega_a;
  if (field == "gamma") return &v.gamma;
  if (field == "scattering_length") return &v.scattering_length;
  if (field == "omega_l") return &v.omega_l;
  if (field == "rabi_peak") return &v.rabi_peak;
  if (field == "k_l") return &v.k_l;
  if (field == "harmonic") return &v.harmonic;
  if (field == "w_l") return &v.w_l;
  if (field == "v_g") return &v.v_g;
  if (field == "rho_0") return &v.rho_0;
  if (field == "w_y") return &v.w_y;
  if (field == "delta_shift") return &v.delta_shift;
  throw ConfigError("unknown parameter '" + std::string(field) + "'");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

void require(bool ok, std::string_view field, const char* rule, double value) {
  if (!ok) {
    std::ostringstream msg;
    msg << "parameter '" << field << "' must be " << rule << " (got " << value << ")";
    throw ConfigError(msg.str());
  }
}

}  // namespace

Dimension dimension_of(Unit u) { return info(u).dim; }

std::string_view unit_name(Unit u) { return info(u).name; }

Unit parse_unit(std::string_view tag) {
  const std::string t = trim(tag);
  for (const auto& i : kUnits) {
    if (i.name == t) return i.unit;
  }
  // A few common spellings.
  if (t == "1/cm") return Unit::per_cm;
  if (t == "1/m") return Unit::per_m;
  if (t == "1/nm") return Unit::per_nm;
  if (t == "1/cm^3" || t == "cm-3") return Unit::per_cm3;
  if (t == "1/m^3" || t == "m-3") return Unit::per_m3;
  if (t == "statC.cm" || t == "statC cm") return Unit::statc_cm;
  if (t == "C.m" || t == "C m") return Unit::c_m;
  if (t == "" || t == "dimensionless") return Unit::one;
  throw ConfigError("unknown unit tag '" + t + "'");
}

double convert_units(double value, Unit from, Unit to) {
  const auto& a = info(from);
  const auto& b = info(to);
  if (a.dim != b.dim) {
    throw DimensionMismatch("cannot convert '" + std::string(a.name) + "' to '" +
                            std::string(b.name) + "': different dimensions");
  }
  if (from == to) return value;
  return value * a.to_cgs / b.to_cgs;
}

UnitSystem parse_unit_system(std::string_view tag) {
  const std::string t = trim(tag);
  if (t == "si" || t == "SI") return UnitSystem::si;
  if (t == "cgs" || t == "CGS") return UnitSystem::cgs;
  throw ConfigError("unit system must be 'si' or 'cgs', got '" + t + "'");
}

std::string_view unit_system_name(UnitSystem s) {
  return s == UnitSystem::si ? "si" : "cgs";
}

bool is_param_field(std::string_view name) {
  return std::find(param_field_names.begin(), param_field_names.end(), name) !=
         param_field_names.end();
}

Unit cgs_unit_of(std::string_view field) { return field_units(field).cgs; }
Unit si_unit_of(std::string_view field) { return field_units(field).si; }

double get_field(const ParamValues& v, std::string_view field) {
  return *field_ptr(v, field);
}

void set_field(ParamValues& v, std::string_view field, double value) {
  *field_ptr(v, field) = value;
}

PhysicalParams::PhysicalParams(const ParamValues& values) : v_(values) {
  for (auto name : param_field_names) {
    const double x = get_field(v_, name);
    require(std::isfinite(x), name, "finite", x);
  }
  require(v_.mass > 0, "mass", "> 0", v_.mass);
  require(v_.dipole > 0, "dipole", "> 0", v_.dipole);
  require(v_.omega_a > 0, "omega_a", "> 0", v_.omega_a);
  require(v_.omega_l > 0, "omega_l", "> 0", v_.omega_l);
  require(v_.k_l > 0, "k_l", "> 0", v_.k_l);
  require(v_.harmonic > 0, "harmonic", "> 0", v_.harmonic);
  require(v_.w_l > 0, "w_l", "> 0", v_.w_l);
  require(v_.w_y > 0, "w_y", "> 0", v_.w_y);
  require(v_.v_g > 0, "v_g", "> 0", v_.v_g);
  require(v_.gamma >= 0, "gamma", ">= 0", v_.gamma);
  require(v_.rho_0 >= 0, "rho_0", ">= 0", v_.rho_0);
  require(v_.rabi_peak >= 0, "rabi_peak", ">= 0", v_.rabi_peak);
  require(v_.scattering_length >= 0, "scattering_length", ">= 0", v_.scattering_length);
}

PhysicalParams PhysicalParams::with(std::string_view field, double value) const {
  ParamValues v = v_;
  set_field(v, field, value);
  return PhysicalParams(v);
}

double detuning(const PhysicalParams& p) {
  return p.omega_l() - p.omega_a() - p.delta_shift();
}

ParamFile read_param_file(std::istream& in, const std::string& source_name) {
  ParamFile out;
  bool saw_units = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(source_name + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) fail("expected 'key = value'");
    if (key == "units") {
      if (saw_units) fail("duplicate key 'units'");
      try {
        out.units = parse_unit_system(value);
      } catch (const ConfigError& e) {
        fail(e.what());
      }
      saw_units = true;
      continue;
    }
    if (!is_param_field(key)) fail("unknown key '" + key + "'");
    if (out.entries.count(key)) fail("duplicate key '" + key + "'");
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(value, &used);
    } catch (const std::exception&) {
      fail("value of '" + key + "' is not a number: '" + value + "'");
    }
    if (used != value.size()) fail("trailing characters in value of '" + key + "'");
    out.entries[key] = x;
  }
  if (!saw_units) {
    throw ConfigError(source_name + ": missing required key 'units' (si | cgs)");
  }
  return out;
}

ParamFile read_param_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open parameter file '" + path + "'");
  return read_param_file(in, path);
}

PhysicalParams params_from_file(const ParamFile& file,
                                const std::map<std::string, double>& overrides) {
  std::map<std::string, double> merged = file.entries;
  for (const auto& [k, v] : overrides) {
    if (!is_param_field(k)) throw ConfigError("unknown parameter override '" + k + "'");
    merged[k] = v;
  }
  static constexpr std::array<std::string_view, 9> required{
      "mass", "dipole", "omega_a", "omega_l", "rabi_peak", "w_l", "v_g", "rho_0", "w_y"};
  for (auto name : required) {
    if (!merged.count(std::string(name))) {
      throw ConfigError("missing required parameter '" + std::string(name) + "'");
    }
  }
  ParamValues v;
  for (const auto& [k, x] : merged) {
    const Unit from = file.units == UnitSystem::si ? si_unit_of(k) : cgs_unit_of(k);
    set_field(v, k, convert_units(x, from, cgs_unit_of(k)));
  }
  if (!merged.count("k_l")) v.k_l = v.omega_l / constants::c_light;
  return PhysicalParams(v);
}

std::map<std::string, double> echo_params(const PhysicalParams& p, UnitSystem units) {
  std::map<std::string, double> out;
  for (auto name : param_field_names) {
    const Unit to = units == UnitSystem::si ? si_unit_of(name) : cgs_unit_of(name);
    out[std::string(name)] = convert_units(get_field(p.values(), name), cgs_unit_of(name), to);
  }
  return out;
}

}  // namespace densebeam
