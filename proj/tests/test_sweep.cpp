#include <doctest.h>

#include <cmath>

#include "densebeam/diffraction.hpp"
#include "densebeam/errors.hpp"
#include "densebeam/sweep.hpp"
#include "support.hpp"

using namespace densebeam;

namespace {

std::vector<double> v0rho_densities(const PhysicalParams& p, std::vector<double> xs) {
  const double v0 = characteristic_volume(p);
  for (auto& x : xs) x /= v0;
  return xs;
}

}  // namespace

TEST_CASE("path lists") {
  const SweepPaths a = parse_paths("analytic");
  CHECK(a.analytic);
  CHECK_FALSE(a.numeric);
  const SweepPaths all = parse_paths("all");
  CHECK(all.count() == 3);
  const SweepPaths two = parse_paths("numeric,propagator");
  CHECK(two.count() == 2);
  CHECK_FALSE(two.analytic);
  CHECK_THROWS_AS(parse_paths("bessel"), ConfigError);
  CHECK_THROWS_AS(parse_paths(""), ConfigError);
}

TEST_CASE("single zero-density point reproduces J_q^2(2 g0)") {
  const PhysicalParams p = testing::reference_params({.g0 = 1.1});
  SweepSpec spec{p, "rho_0", {0.0}, {}};
  spec.q_max = 12;
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].ok());
  for (int q = -12; q <= 12; ++q) {
    const double j = std::cyl_bessel_j(double(std::abs(q)), *rows[0].tau);
    CHECK(std::abs(rows[0].analytic->probability(q) - j * j) <= 1e-13);
  }
  CHECK_FALSE(rows[0].discrepancy.has_value());
}

TEST_CASE("density axis, Delta > 0: tau strictly decreasing") {
  const PhysicalParams p = testing::reference_params({.g0 = 1.0});
  SweepSpec spec{p, "rho_0", v0rho_densities(p, {0, 0.1, 0.2, 0.4, 0.7, 1.0}), {}};
  const auto rows = run_sweep(spec);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(*rows[i].tau < *rows[i - 1].tau);
}

TEST_CASE("failed points are marked, not dropped") {
  const PhysicalParams m = testing::reference_params({.g0 = 0.3, .sign = -1});
  SweepSpec spec{m, "rho_0", v0rho_densities(m, {0.0, -1.0, -0.3}), {}};
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ok());
  CHECK_FALSE(rows[1].ok());
  CHECK_FALSE(rows[1].flags.pole_distance);
  CHECK(rows[2].ok());

  SweepSpec bad{m, "rho_0", v0rho_densities(m, {-1.0}), {}};
  CHECK_THROWS_AS(run_sweep(bad), SweepError);
  SweepSpec invalid{m, "mass", {-1.0, 0.0}, {}};
  try {
    run_sweep(invalid);
    FAIL("expected SweepError");
  } catch (const SweepError& e) {
    CHECK(std::string(e.what()).find("mass") != std::string::npos);
  }
}

TEST_CASE("spec validation") {
  const PhysicalParams p = testing::reference_params();
  CHECK_THROWS_AS(run_sweep(SweepSpec{p, "colour", {1.0}, {}}), ConfigError);
  CHECK_THROWS_AS(run_sweep(SweepSpec{p, "rho_0", {}, {}}), ConfigError);
  CHECK_THROWS_AS(run_sweep(SweepSpec{p, "rho_0", {std::nan("")}, {}}), ConfigError);
}

TEST_CASE("validity flags") {
  const PhysicalParams p = testing::reference_params({.v0_rho0 = 0.3});
  CHECK(validity_flags(p).all());
  CHECK_FALSE(validity_flags(p.with("w_y", 5 * testing::kLambda)).broadness);
  CHECK_FALSE(validity_flags(p.with("gamma", 1e12)).adiabatic);
  const PhysicalParams m = testing::reference_params({.g0 = 0.3, .v0_rho0 = -0.95, .sign = -1});
  CHECK_FALSE(validity_flags(m).pole_distance);
}

TEST_CASE("q_max resolution") {
  const PhysicalParams p = testing::reference_params({.g0 = 1.7});
  SweepSpec spec{p, "rho_0", v0rho_densities(p, {0.0, 0.5}), {}};
  CHECK(resolve_sweep_q_max(spec) == 34);
  spec.q_max = 7;
  CHECK(resolve_sweep_q_max(spec) == 7);
}

TEST_CASE("results do not depend on the thread count") {
  const PhysicalParams p = testing::reference_params({.g0 = 1.5});
  SweepSpec spec{p, "rho_0", v0rho_densities(p, {0, 0.05, 0.1, 0.2, 0.3, 0.5}), parse_paths("analytic,numeric")};
  spec.grid_points = 1024;
  spec.threads = 1;
  const auto a = run_sweep(spec);
  spec.threads = 4;
  const auto b = run_sweep(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].value == b[i].value);
    CHECK(a[i].numeric->probabilities == b[i].numeric->probabilities);
    CHECK(a[i].analytic->probabilities == b[i].analytic->probabilities);
    CHECK(*a[i].discrepancy == *b[i].discrepancy);
  }
}
