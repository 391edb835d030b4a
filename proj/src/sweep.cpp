#include "densebeam/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "densebeam/constants.hpp"
#include "densebeam/diffraction.hpp"
#include "densebeam/medium_optics.hpp"
#include "densebeam/wave_propagator.hpp"

namespace densebeam {

namespace {

SweepRow evaluate_point(const SweepSpec& spec, double value, int q_max) {
  SweepRow row;
  row.value = value;
  try {
    const PhysicalParams p = spec.base.with(spec.axis, value);
    row.flags = validity_flags(p);
    const RamanNathParams rn = raman_nath_params(p);
    row.tau = rn.tau;
    row.g0 = rn.g0;
    row.v0_rho0 = rn.v0 * p.rho_0();

    if (spec.paths.analytic) {
      row.analytic = analytic_orders(rn.tau, q_max);
      row.analytic->angles = diffraction_angles(p, q_max);
    }
    if (spec.paths.numeric || spec.paths.propagator) {
      const int n_points = spec.grid_points > 0 ? spec.grid_points : mask_grid_points(p, spec.box_factor);
      const Grid1D grid = diffraction_grid(p, n_points, spec.box_factor);
      if (spec.paths.numeric) row.numeric = numeric_orders(p, rn, grid, q_max);
      if (spec.paths.propagator) {
        // rho_0 = 0: a unit probe spread over an unbounded cross-section, so
        // the density the models see is exactly zero.
        const double area =
            p.rho_0() > 0.0 ? spec.transverse_area : std::numeric_limits<double>::infinity();
        const WaveState in = p.rho_0() > 0.0
                                 ? sample_gaussian(grid, p.rho_0(), p.w_y(), area)
                                 : sample_gaussian(grid, 1.0, p.w_y(), 1.0);
        PropagationConfig cfg = laser_pass_config(p, spec.model, spec.kinetic_enabled, area,
                                                  spec.propagator_steps);
        cfg.override_adiabatic_guard = true;  // reported through the flags instead
        const WaveState out = propagate_through_laser(in, cfg, p);
        row.propagator = momentum_spectrum(out, 2.0 * effective_wavenumber(p), q_max);
      }
    }

    std::vector<const DiffractionPattern*> present;
    for (const auto* pat : {&row.analytic, &row.numeric, &row.propagator}) {
      if (pat->has_value()) present.push_back(&pat->value());
    }
    if (present.size() >= 2) {
      double worst = 0.0;
      for (std::size_t a = 0; a < present.size(); ++a) {
        for (std::size_t b = a + 1; b < present.size(); ++b) {
          worst = std::max(worst, max_order_discrepancy(*present[a], *present[b]));
        }
      }
      row.discrepancy = worst;
    }
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepPaths parse_paths(const std::string& list) {
  SweepPaths paths{false, false, false};
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "analytic") paths.analytic = true;
    else if (item == "numeric") paths.numeric = true;
    else if (item == "propagator") paths.propagator = true;
    else if (item == "all") paths = {true, true, true};
    else throw ConfigError("unknown path '" + item + "' (analytic | numeric | propagator | all)");
  }
  if (paths.count() == 0) throw ConfigError("no computation path selected");
  return paths;
}

ValidityFlags validity_flags(const PhysicalParams& p) {
  ValidityFlags f;
  f.adiabatic = adiabatic_valid(adiabatic_validity(p, p.rho_0()));
  f.pole_distance = std::abs(1.0 + characteristic_volume(p) * p.rho_0()) >= 0.1;
  f.broadness = p.w_y() >= 10.0 * 2.0 * constants::pi / effective_wavenumber(p);
  return f;
}

int resolve_sweep_q_max(const SweepSpec& spec) {
  if (spec.q_max > 0) return spec.q_max;
  double widest = 0.0;
  for (double v : spec.values) {
    try {
      widest = std::max(widest, std::abs(raman_nath_params(spec.base.with(spec.axis, v)).tau));
    } catch (const Error&) {
    }
  }
  return default_q_max(widest);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (!is_param_field(spec.axis)) {
    throw ConfigError("sweep axis '" + spec.axis + "' is not a parameter field");
  }
  if (spec.values.empty()) throw ConfigError("sweep needs at least one value");
  for (double v : spec.values) {
    if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
  }
  if (spec.paths.count() == 0) throw ConfigError("no computation path selected");

  const int q_max = resolve_sweep_q_max(spec);
  std::vector<SweepRow> rows(spec.values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i] = evaluate_point(spec, spec.values[i], q_max);
    }
  };
  const int threads = std::clamp<int>(spec.threads, 1, static_cast<int>(rows.size()));
  std::vector<std::jthread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  if (std::none_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok(); })) {
    std::ostringstream msg;
    msg << "every sweep point failed:";
    for (const auto& r : rows) msg << "\n  " << spec.axis << " = " << r.value << ": " << r.error;
    throw SweepError(msg.str());
  }
  return rows;
}

}  // namespace densebeam
