#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "densebeam/errors.hpp"
#include "densebeam/format.hpp"
#include "densebeam/wave_propagator.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "densebeam");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = densebeam::app::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "densebeam_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_params(const std::string& name, const densebeam::ParamValues& v) {
  const fs::path path = scratch() / name;
  std::ofstream f(path);
  f << "units = cgs\n";
  for (auto field : densebeam::param_field_names) {
    f << field << " = " << densebeam::format_number(densebeam::get_field(v, field), 17) << '\n';
  }
  return path.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"optics"}).code == 1);  // no --params
  CHECK(cli({"--params", "/nonexistent.param", "optics"}).code == 1);
  const std::string p = write_params("ref.param", densebeam::testing::reference_values());
  CHECK(cli({"--params", p, "--format", "xml", "optics"}).code == 1);
  CHECK(cli({"--params", p, "--set", "bogus=1", "optics"}).code == 1);
  CHECK(cli({"--params", p, "sweep", "--axis", "rho_0"}).code == 1);  // empty values
  CHECK(cli({"--params", p, "sweep", "--axis", "colour", "--values", "1"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("optics report at zero density") {
  const std::string p = write_params("ref.param", densebeam::testing::reference_values());
  const Run r = cli({"--params", p, "optics"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["results"]["chi"] == 0.0);
  CHECK(j["results"]["n_squared"] == 1.0);
  CHECK(j["params"]["units"] == "cgs");
  CHECK(j["params"]["mass"].get<double>() == 3.82e-23);
  CHECK(r.out.back() == '\n');

  const Run si = cli({"--params", p, "--units", "si", "optics"});
  CHECK(json::parse(si.out)["params"]["mass"].get<double>() == doctest::Approx(3.82e-26).epsilon(1e-15));

  const Run csv = cli({"--params", p, "--format", "csv", "optics", "--density", "0"});
  CHECK(csv.out.rfind("quantity,value\n", 0) == 0);
  CHECK(csv.out.find("\nchi,0\n") != std::string::npos);
}

TEST_CASE("optics reports guard failures per quantity and exits 2") {
  auto v = densebeam::testing::reference_values({.g0 = 0.3, .sign = -1});
  const double alpha = -v.dipole * v.dipole / (densebeam::testing::kHbar * (v.omega_l - v.omega_a));
  const double pole = 3.0 / (4 * densebeam::testing::kPi * alpha);
  const std::string p = write_params("neg.param", v);
  const Run r = cli({"--params", p, "optics", "--density", densebeam::format_number(pole, 17)});
  CHECK(r.code == 2);
  const json j = json::parse(r.out);
  CHECK(j["results"]["chi"].is_null());
  CHECK(j["errors"].contains("chi"));
  CHECK(r.err.find("guard: chi") != std::string::npos);
}

TEST_CASE("contact bound through the CLI") {
  auto v = densebeam::testing::reference_values();
  v.scattering_length = 1e-7;
  v.omega_a = 0.01 * 1e7 * densebeam::testing::kC;
  v.omega_l = v.omega_a * (1 + 1e-6);
  v.k_l = v.omega_l / densebeam::testing::kC;
  const std::string p = write_params("contact.param", v);
  const json j = json::parse(cli({"--params", p, "optics"}).out);
  CHECK(j["results"]["contact_bound"].get<double>() == doctest::Approx(37.5).epsilon(1e-12));
}

TEST_CASE("validity command") {
  const std::string p = write_params("ref.param", densebeam::testing::reference_values());
  const Run ok = cli({"--params", p, "validity"});
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["all_ok"] == true);
  const Run bad = cli({"--params", p, "--set", "gamma=1e12", "validity"});
  CHECK(bad.code == 2);
  CHECK(json::parse(bad.out)["checks"]["adiabatic"]["ok"] == false);
}

TEST_CASE("diffract analytic at zero density") {
  const std::string p = write_params("ref.param", densebeam::testing::reference_values({.g0 = 1.7}));
  const Run r = cli({"--params", p, "diffract"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["tau"].get<double>() == doctest::Approx(3.4).epsilon(1e-9));
  for (const auto& o : j["paths"]["analytic"]["orders"]) {
    const int q = o["q"];
    const double jq = std::cyl_bessel_j(double(std::abs(q)), j["tau"].get<double>());
    CHECK(std::abs(o["P"].get<double>() - jq * jq) <= 1e-13);
  }
  CHECK(std::abs(j["paths"]["analytic"]["sum"].get<double>() - 1.0) <= 1e-9);
  CHECK(j["angles"].size() == j["paths"]["analytic"]["orders"].size());
}

TEST_CASE("diffract all paths reports discrepancies") {
  const std::string p = write_params("ref.param", densebeam::testing::reference_values({.g0 = 1.0}));
  const Run r = cli({"--params", p, "diffract", "--paths", "all", "--grid-points", "8192", "--propagator-steps", "1024"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["discrepancy"]["max"].get<double>() <= 1e-3);
  CHECK(j["discrepancy"]["numeric_propagator"].get<double>() <= 1e-6);
}

TEST_CASE("commensurability error suggests a length") {
  // Pass a grid that the propagator path cannot bin.
  densebeam::PhysicalParams p = densebeam::testing::reference_params();
  densebeam::Grid1D g(64, -1.0, 1.0);
  densebeam::WaveState s{g, std::vector<std::complex<double>>(64, 1.0), 0.0};
  try {
    densebeam::momentum_spectrum(s, 2 * densebeam::effective_wavenumber(p), 3);
    FAIL("expected ConfigError");
  } catch (const densebeam::ConfigError& e) {
    CHECK(std::string(e.what()).find("compatible length") != std::string::npos);
  }
}

TEST_CASE("propagate writes snapshots and a spectrum") {
  const fs::path dir = scratch() / "snaps";
  fs::remove_all(dir);
  auto v = densebeam::testing::reference_values({.g0 = 1.0, .v0_rho0 = 0.2});
  const std::string p = write_params("prop.param", v);
  const Run r = cli({"--params", p, "propagate", "--kinetic", "off", "--steps", "2048", "--grid-points", "4096",
                     "--snapshot-steps", "0,2048", "--snapshot-dir", dir.string()});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["norm_relative_drift"].get<double>()) < 1e-12);
  CHECK(j["snapshots"].size() == 2);
  const std::string first = slurp(dir / "snapshot_step0.csv");
  CHECK(first.rfind("y_cm,re_psi,im_psi,density\n", 0) == 0);

  // The t = 0 snapshot density is the configured Gaussian.
  std::istringstream in(first);
  std::string line;
  std::getline(in, line);
  double worst = 0.0;
  while (std::getline(in, line)) {
    double y, re, im, rho;
    char c;
    std::istringstream row(line);
    row >> y >> c >> re >> c >> im >> c >> rho;
    worst = std::max(worst, std::abs(rho - v.rho_0 * std::exp(-y * y / (v.w_y * v.w_y))) / v.rho_0);
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("propagate: zero laser with kinetic term conserves the norm") {
  auto v = densebeam::testing::reference_values({.v0_rho0 = 0.1});
  v.rabi_peak = 0.0;
  const std::string p = write_params("dark.param", v);
  const Run r = cli({"--params", p, "propagate", "--steps", "2048", "--grid-points", "4096"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(json::parse(r.out)["norm_relative_drift"].get<double>()) <= 1e-12);
}

TEST_CASE("propagate: Raman-Nath toggle at heavy mass") {
  auto v = densebeam::testing::reference_values({.g0 = 1.0});
  v.mass *= 100;
  const std::string p = write_params("heavy.param", v);
  const json off = json::parse(cli({"--params", p, "propagate", "--kinetic", "off", "--steps", "2048"}).out);
  const json on = json::parse(cli({"--params", p, "propagate", "--kinetic", "on", "--steps", "2048"}).out);
  const auto& a = off["spectrum"]["orders"];
  const auto& b = on["spectrum"]["orders"];
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double pa = a[i]["P"], pb = b[i]["P"];
    if (pa > 1e-3) CHECK(std::abs(pa - pb) < 0.05 * pa);
  }
}

TEST_CASE("propagate NaN abort leaves the last good state") {
  const fs::path dir = scratch() / "nan";
  fs::remove_all(dir);
  auto v = densebeam::testing::reference_values();
  v.rabi_peak = 1e300;  // |Omega|^2 overflows
  const std::string p = write_params("nan.param", v);
  const Run r = cli({"--params", p, "propagate", "--kinetic", "off", "--steps", "128", "--grid-points", "4096",
                     "--snapshot-dir", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("last good state") != std::string::npos);
  CHECK(fs::exists(dir / "last_good.csv"));
}

TEST_CASE("bloch command") {
  const std::string p = write_params("ref.param", densebeam::testing::reference_values());
  // Undriven relaxation from W = 0.
  const Run r = cli({"--params", p, "--format", "csv", "bloch", "--detuning", "0", "--gamma-l", "2", "--gamma-t", "1",
                     "--dt", "0.01", "--steps", "300", "--w0", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t_s,re_R,im_R,W\n", 0) == 0);
  const auto last_line = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
  double t, re, im, w;
  char c;
  std::istringstream(last_line) >> t >> c >> re >> c >> im >> c >> w;
  CHECK(w == doctest::Approx(-1 + std::exp(-6.0)).epsilon(1e-8));
  CHECK(r.err.find("steady-state residual") != std::string::npos);

  const Run rabi = cli({"--params", p, "bloch", "--detuning", "0", "--drive-re", "1", "--field", "bare",
                        "--dt", "0.001", "--steps", "6284"});
  const json j = json::parse(rabi.out);
  CHECK(j["W_min"].get<double>() == doctest::Approx(-1).epsilon(1e-4));
  CHECK(j["W_max"].get<double>() == doctest::Approx(1).epsilon(1e-4));
  CHECK(j["steady_state"].is_null());

  CHECK(cli({"--params", p, "bloch", "--detuning", "1000", "--dt", "0.01", "--steps", "10"}).code == 1);
}

TEST_CASE("sweep CSV, report and exit codes") {
  const fs::path dir = scratch();
  auto v = densebeam::testing::reference_values({.g0 = 1.0});
  const double v0 = 4 * densebeam::testing::kPi * v.dipole * v.dipole /
                    (3 * densebeam::testing::kHbar * (v.omega_l - v.omega_a));
  const std::string p = write_params("sweep.param", v);
  std::string values;
  for (double x : {0.0, 0.25, 0.5}) values += (values.empty() ? "" : ",") + densebeam::format_number(x / v0, 17);
  const fs::path out = dir / "sweep.csv";
  const Run r = cli({"--params", p, "--format", "csv", "--out", out.string(), "sweep", "--axis", "rho_0",
                     "--values", values, "--q-max", "4"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("rho_0,tau,P_0,P_1,P_2,P_3,P_4,discrepancy,adiabatic_ok,pole_ok,broad_ok,error\n", 0) == 0);
  CHECK(csv.back() == '\n');
  const json rep = json::parse(slurp(dir / "sweep.json"));
  CHECK(rep["rows"].size() == 3);
  CHECK(rep.contains("meta"));
  CHECK(rep["summary"]["points"] == 3);

  // One point outside the adiabatic domain: flagged, exit 2.
  const Run flagged = cli({"--params", p, "sweep", "--axis", "gamma", "--values", "1e7,1e12"});
  CHECK(flagged.code == 2);
  // Every point failing: exit 1 with reasons.
  const Run dead = cli({"--params", p, "sweep", "--axis", "mass", "--values", "-1,0"});
  CHECK(dead.code == 1);
  CHECK(dead.err.find("mass") != std::string::npos);
}

TEST_CASE("sweep range option") {
  const std::string p = write_params("ref.param", densebeam::testing::reference_values());
  const json j = json::parse(cli({"--params", p, "sweep", "--axis", "rho_0", "--range", "0,1e15,5"}).out);
  REQUIRE(j["rows"].size() == 5);
  CHECK(j["rows"][4]["value"].get<double>() == 1e15);
  CHECK(j["rows"][2]["value"].get<double>() == 5e14);
}
