#include <doctest.h>

#include <sstream>

#include "densebeam/errors.hpp"
#include "densebeam/units.hpp"
#include "support.hpp"

using namespace densebeam;
using densebeam::testing::reference_values;

TEST_CASE("detuning subtracts the transition and the shift") {
  ParamValues v = reference_values();
  v.omega_l = v.omega_a;
  CHECK(detuning(PhysicalParams(v)) == 0.0);

  v.omega_a = 1e15;
  v.omega_l = 1e15 + 2 * testing::kPi * 1e9;
  CHECK(detuning(PhysicalParams(v)) == doctest::Approx(2 * testing::kPi * 1e9).epsilon(1e-6));
  v.omega_l = 1e15 - 2 * testing::kPi * 1e9;
  CHECK(detuning(PhysicalParams(v)) == doctest::Approx(-2 * testing::kPi * 1e9).epsilon(1e-6));

  v.omega_l = 1e15;
  v.delta_shift = 5.0;
  CHECK(detuning(PhysicalParams(v)) == -5.0);
}

TEST_CASE("unit conversions from the definitions") {
  CHECK(convert_units(1.0, Unit::nm, Unit::cm) == doctest::Approx(1e-7).epsilon(1e-15));
  CHECK(convert_units(1e15, Unit::per_cm3, Unit::per_m3) == doctest::Approx(1e21).epsilon(1e-15));
  CHECK(convert_units(1.0, Unit::kg, Unit::g) == 1e3);
  CHECK(convert_units(1.0, Unit::c_m, Unit::statc_cm) == doctest::Approx(2.99792458e11).epsilon(1e-15));
  CHECK(convert_units(1.0, Unit::hz, Unit::rad_per_s) == doctest::Approx(2 * testing::kPi));
  CHECK(convert_units(0.01, Unit::per_nm, Unit::per_cm) == doctest::Approx(1e5).epsilon(1e-15));
}

TEST_CASE("dimension mismatch names both tags") {
  try {
    convert_units(1.0, Unit::cm, Unit::per_cm3);
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cm") != std::string::npos);
    CHECK(msg.find("cm^-3") != std::string::npos);
  }
}

TEST_CASE("unit tags parse") {
  CHECK(parse_unit("nm") == Unit::nm);
  CHECK(parse_unit("cm^-3") == Unit::per_cm3);
  CHECK(parse_unit("rad/s") == Unit::rad_per_s);
  CHECK_THROWS_AS(parse_unit("furlong"), ConfigError);
}

TEST_CASE("construction rejects every non-positive required field") {
  for (const char* f : {"mass", "dipole", "omega_a", "omega_l", "k_l", "w_l", "w_y", "v_g", "harmonic"}) {
    CAPTURE(f);
    for (double bad : {0.0, -1.0}) {
      ParamValues v = reference_values();
      set_field(v, f, bad);
      CHECK_THROWS_AS(PhysicalParams{v}, ConfigError);
    }
  }
  for (const char* f : {"gamma", "rho_0", "rabi_peak", "scattering_length"}) {
    CAPTURE(f);
    ParamValues v = reference_values();
    set_field(v, f, -1.0);
    CHECK_THROWS_AS(PhysicalParams{v}, ConfigError);
    set_field(v, f, 0.0);
    CHECK_NOTHROW(PhysicalParams{v});
  }
  ParamValues v = reference_values();
  v.w_l = std::nan("");
  CHECK_THROWS_AS(PhysicalParams{v}, ConfigError);
}

TEST_CASE("with() replaces one field and revalidates") {
  const PhysicalParams p = testing::reference_params();
  const PhysicalParams q = p.with("rho_0", 1e10);
  CHECK(q.rho_0() == 1e10);
  CHECK(q.mass() == p.mass());
  CHECK_THROWS_AS(p.with("mass", -1.0), ConfigError);
  CHECK_THROWS_AS(p.with("colour", 1.0), ConfigError);
}

TEST_CASE("parameter file parsing") {
  std::istringstream in(R"(# comment
units = si
mass = 3.82e-26   # kg
dipole = 2e-29
omega_a = 3.2e15
omega_l = 3.2e15
rabi_peak = 1e8
w_l = 1e-5
v_g = 100
rho_0 = 1e20
w_y = 3e-5
)");
  const ParamFile f = read_param_file(in, "test");
  CHECK(f.units == UnitSystem::si);
  const PhysicalParams p = params_from_file(f);
  CHECK(p.mass() == doctest::Approx(3.82e-23).epsilon(1e-15));
  CHECK(p.w_y() == doctest::Approx(3e-3).epsilon(1e-15));
  CHECK(p.rho_0() == doctest::Approx(1e14).epsilon(1e-15));
  CHECK(p.v_g() == doctest::Approx(1e4).epsilon(1e-15));
  CHECK(p.k_l() == doctest::Approx(3.2e15 / testing::kC).epsilon(1e-15));
  CHECK(p.harmonic() == 1.0);

  const PhysicalParams q = params_from_file(f, {{"rho_0", 2e20}});
  CHECK(q.rho_0() == doctest::Approx(2e14).epsilon(1e-15));

  const auto echo = echo_params(p, UnitSystem::si);
  CHECK(echo.at("mass") == doctest::Approx(3.82e-26).epsilon(1e-15));
}

TEST_CASE("parameter file errors carry the line") {
  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_param_file(in, "f.param");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("units = cgs\nbogus = 1\n").find("f.param:2") != std::string::npos);
  CHECK(error_of("units = cgs\nmass = 1\nmass = 2\n").find("duplicate") != std::string::npos);
  CHECK(error_of("mass = 1\n").find("units") != std::string::npos);
  CHECK(error_of("units = cgs\nmass = abc\n").find("f.param:2") != std::string::npos);
  CHECK(error_of("units = imperial\n").find("f.param:1") != std::string::npos);

  std::istringstream missing("units = cgs\nmass = 1\n");
  CHECK_THROWS_AS(params_from_file(read_param_file(missing, "m")), ConfigError);
}
