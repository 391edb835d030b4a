#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "densebeam/bloch.hpp"
#include "densebeam/constants.hpp"
#include "densebeam/diffraction.hpp"
#include "densebeam/effective_models.hpp"
#include "densebeam/errors.hpp"
#include "densebeam/format.hpp"
#include "densebeam/medium_optics.hpp"
#include "densebeam/sweep.hpp"
#include "densebeam/units.hpp"
#include "densebeam/wave_propagator.hpp"

namespace densebeam::app {

using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Loaded {
  ParamFile file;
  PhysicalParams params;
  UnitSystem echo_units;
};

std::map<std::string, double> parse_overrides(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(value, &used);
    } catch (const std::exception&) {
      throw ConfigError("--set " + key + ": not a number: '" + value + "'");
    }
    if (used != value.size()) throw ConfigError("--set " + key + ": trailing characters");
    out[key] = x;
  }
  return out;
}

Loaded load(const GlobalOptions& g) {
  if (g.params_path.empty()) throw ConfigError("--params <file> is required");
  if (g.format != "json" && g.format != "csv") {
    throw ConfigError("--format must be json or csv, got '" + g.format + "'");
  }
  ParamFile file = read_param_file(g.params_path);
  PhysicalParams params = params_from_file(file, parse_overrides(g.overrides));
  const UnitSystem echo = g.units.empty() ? file.units : parse_unit_system(g.units);
  return {std::move(file), std::move(params), echo};
}

/// Converts a value given in the file's unit system for `field` to CGS.
double field_to_cgs(const ParamFile& file, const std::string& field, double value) {
  const Unit from = file.units == UnitSystem::si ? si_unit_of(field) : cgs_unit_of(field);
  return convert_units(value, from, cgs_unit_of(field));
}

ordered_json params_json(const PhysicalParams& p, UnitSystem units) {
  ordered_json j;
  j["units"] = std::string(unit_system_name(units));
  const auto echo = echo_params(p, units);
  for (auto name : param_field_names) j[std::string(name)] = echo.at(std::string(name));
  return j;
}

ordered_json pattern_json(const DiffractionPattern& pat) {
  ordered_json orders = ordered_json::array();
  for (int q = -pat.q_max; q <= pat.q_max; ++q) {
    orders.push_back({{"q", q}, {"P", pat.probability(q)}});
  }
  ordered_json j;
  j["orders"] = orders;
  j["sum"] = pat.total();
  return j;
}

/// Writes `text` to the --out file, or to `data` if none. Always ends in a newline.
void emit(const GlobalOptions& g, const std::string& text, std::ostream& data) {
  std::string body = text;
  if (body.empty() || body.back() != '\n') body.push_back('\n');
  if (g.out.empty()) {
    data << body;
    data.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file '" + g.out + "'");
  f << body;
}

std::string dump(const ordered_json& j) { return j.dump(2); }

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const NumericalBlowup& e) {
    log << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    log << "physics error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

int run_optics(const GlobalOptions& g, const OpticsOptions& o, std::ostream& data,
               std::ostream& log) {
  return guarded(log, [&] {
    const Loaded in = load(g);
    const PhysicalParams& p = in.params;
    const double rho = o.density ? field_to_cgs(in.file, "rho_0", *o.density) : p.rho_0();
    if (!(rho >= 0.0)) throw ConfigError("density must be >= 0");

    ordered_json results;
    ordered_json errors = ordered_json::object();
    auto attempt = [&](const char* name, auto&& f) {
      try {
        results[name] = f();
      } catch (const Error& e) {
        results[name] = nullptr;
        errors[name] = e.what();
      }
    };
    results["density"] = rho;
    results["detuning"] = detuning(p);
    attempt("alpha", [&] { return polarizability(p); });
    attempt("chi", [&] { return susceptibility(polarizability(p), rho); });
    attempt("n_squared", [&] { return refractive_index_sq(polarizability(p), rho); });
    results["local_detuning"] = local_detuning(p, rho);
    attempt("v0", [&] { return characteristic_volume(p); });
    attempt("v0_rho", [&] { return characteristic_volume(p) * rho; });
    const double ratio = adiabatic_validity(p, rho);
    results["adiabatic_ratio"] = ratio;  // null when gamma = 0 (infinite)
    results["adiabatic_valid"] = adiabatic_valid(ratio);
    attempt("contact_bound", [&] { return contact_interaction_bound(o.saturation, p); });
    if (!results["contact_bound"].is_null()) {
      results["contact_negligible"] =
          contact_interaction_negligible(results["contact_bound"].get<double>());
    }
    results["saturation"] = o.saturation;
    attempt("significant_density", [&] { return significant_density(p).exact; });
    try {
      const auto sd = significant_density(p);
      if (sd.estimate) {
        results["significant_density_estimate"] = *sd.estimate;
      } else {
        results["significant_density_estimate"] = nullptr;
        errors["significant_density_estimate"] = "gamma = 0: scaling estimate undefined";
      }
    } catch (const Error&) {
      results["significant_density_estimate"] = nullptr;
    }

    if (g.format == "json") {
      ordered_json j;
      j["command"] = "optics";
      j["params"] = params_json(p, in.echo_units);
      j["results"] = results;
      j["errors"] = errors;
      emit(g, dump(j), data);
    } else {
      std::ostringstream csv;
      csv << "quantity,value\n";
      const ordered_json echo = params_json(p, in.echo_units);
      for (const auto& [k, v] : echo.items()) {
        if (k == "units") continue;
        csv << "param." << k << ',' << csv_number(v.get<double>()) << '\n';
      }
      for (const auto& [k, v] : results.items()) {
        csv << k << ',';
        if (v.is_boolean()) csv << (v.get<bool>() ? "true" : "false");
        else if (v.is_null()) csv << "nan";
        else csv << csv_number(v.get<double>());
        csv << '\n';
      }
      emit(g, csv.str(), data);
    }
    for (const auto& [k, v] : errors.items()) log << "guard: " << k << ": " << v.get<std::string>() << '\n';
    return errors.empty() ? kSuccess : kPartialFailure;
  });
}

// ---------------------------------------------------------------------------

int run_validity(const GlobalOptions& g, const ValidityOptions& o, std::ostream& data,
                 std::ostream& log) {
  return guarded(log, [&] {
    const Loaded in = load(g);
    const PhysicalParams& p = in.params;
    ordered_json checks;
    bool all_ok = true;

    const double ratio = adiabatic_validity(p, p.rho_0());
    const bool adiabatic = adiabatic_valid(ratio, o.adiabatic_threshold);
    checks["adiabatic"] = {{"value", ratio}, {"threshold", o.adiabatic_threshold}, {"ok", adiabatic}};
    all_ok &= adiabatic;

    try {
      const double bound = contact_interaction_bound(o.saturation, p);
      const bool ok = contact_interaction_negligible(bound, o.contact_threshold);
      checks["contact_interaction"] = {
          {"value", bound}, {"threshold", o.contact_threshold}, {"ok", ok}};
      all_ok &= ok;
    } catch (const Error& e) {
      checks["contact_interaction"] = {{"value", nullptr}, {"ok", false}, {"error", e.what()}};
      all_ok = false;
    }

    try {
      const double dist = std::abs(1.0 + characteristic_volume(p) * p.rho_0());
      const bool ok = dist >= 0.1;
      checks["pole_distance"] = {{"value", dist}, {"threshold", 0.1}, {"ok", ok}};
      all_ok &= ok;
    } catch (const Error& e) {
      checks["pole_distance"] = {{"value", nullptr}, {"ok", false}, {"error", e.what()}};
      all_ok = false;
    }

    const double lambda_eff = 2.0 * constants::pi / effective_wavenumber(p);
    const bool broad = p.w_y() >= 10.0 * lambda_eff;
    checks["broadness"] = {{"value", p.w_y() / lambda_eff}, {"threshold", 10.0}, {"ok", broad}};
    all_ok &= broad;

    if (g.format == "json") {
      ordered_json j;
      j["command"] = "validity";
      j["params"] = params_json(p, in.echo_units);
      j["checks"] = checks;
      j["all_ok"] = all_ok;
      emit(g, dump(j), data);
    } else {
      std::ostringstream csv;
      csv << "check,value,threshold,ok\n";
      for (const auto& [k, v] : checks.items()) {
        csv << k << ',' << (v["value"].is_null() ? std::string("nan") : csv_number(v["value"].get<double>()))
            << ',' << (v.contains("threshold") ? csv_number(v["threshold"].get<double>()) : std::string("nan"))
            << ',' << (v["ok"].get<bool>() ? "true" : "false") << '\n';
      }
      emit(g, csv.str(), data);
    }
    log << (all_ok ? "all validity checks pass\n" : "some validity checks fail\n");
    return all_ok ? kSuccess : kPartialFailure;
  });
}

// ---------------------------------------------------------------------------

int run_diffract(const GlobalOptions& g, const DiffractOptions& o, std::ostream& data,
                 std::ostream& log) {
  return guarded(log, [&] {
    const Loaded in = load(g);
    const PhysicalParams& p = in.params;
    const SweepPaths paths = parse_paths(o.paths);
    const ModelKind model = parse_model_kind(o.model);

    SweepSpec spec{p, "rho_0", {p.rho_0()}, {}};
    spec.paths = paths;
    spec.q_max = o.q_max;
    spec.grid_points = o.grid_points;
    spec.box_factor = o.box_factor;
    spec.transverse_area = o.transverse_area;
    spec.propagator_steps = o.propagator_steps;
    spec.kinetic_enabled = o.kinetic;
    spec.model = model;
    const int q_max = resolve_sweep_q_max(spec);
    spec.q_max = q_max;

    // A single point: SweepError carries the point's own error message.
    const std::vector<SweepRow> rows = run_sweep(spec);
    const SweepRow& row = rows.front();
    const std::vector<double> angles = diffraction_angles(p, q_max);

    if (g.format == "json") {
      ordered_json j;
      j["command"] = "diffract";
      j["params"] = params_json(p, in.echo_units);
      j["tau"] = *row.tau;
      j["g0"] = *row.g0;
      j["v0_rho0"] = *row.v0_rho0;
      j["q_max"] = q_max;
      ordered_json pj;
      if (row.analytic) pj["analytic"] = pattern_json(*row.analytic);
      if (row.numeric) pj["numeric"] = pattern_json(*row.numeric);
      if (row.propagator) pj["propagator"] = pattern_json(*row.propagator);
      j["paths"] = pj;
      ordered_json aj = ordered_json::array();
      for (int q = -q_max; q <= q_max; ++q) aj.push_back({{"q", q}, {"alpha_rad", angles[q + q_max]}});
      j["angles"] = aj;
      ordered_json dj;
      if (row.analytic && row.numeric) dj["analytic_numeric"] = max_order_discrepancy(*row.analytic, *row.numeric);
      if (row.analytic && row.propagator) dj["analytic_propagator"] = max_order_discrepancy(*row.analytic, *row.propagator);
      if (row.numeric && row.propagator) dj["numeric_propagator"] = max_order_discrepancy(*row.numeric, *row.propagator);
      if (row.discrepancy) dj["max"] = *row.discrepancy;
      j["discrepancy"] = dj.is_null() ? ordered_json::object() : dj;
      j["flags"] = {{"adiabatic", row.flags.adiabatic},
                    {"pole_distance", row.flags.pole_distance},
                    {"broadness", row.flags.broadness}};
      emit(g, dump(j), data);
    } else {
      std::ostringstream csv;
      csv << "q,alpha_rad";
      if (row.analytic) csv << ",P_analytic";
      if (row.numeric) csv << ",P_numeric";
      if (row.propagator) csv << ",P_propagator";
      csv << '\n';
      for (int q = -q_max; q <= q_max; ++q) {
        csv << q << ',' << csv_number(angles[q + q_max]);
        for (const auto* pat : {&row.analytic, &row.numeric, &row.propagator}) {
          if (pat->has_value()) csv << ',' << csv_number((*pat)->probability(q));
        }
        csv << '\n';
      }
      emit(g, csv.str(), data);
    }
    log << "tau = " << format_number(*row.tau, 10) << ", g0 = " << format_number(*row.g0, 10)
        << ", V0 rho0 = " << format_number(*row.v0_rho0, 10);
    if (row.discrepancy) log << ", max cross-path discrepancy = " << format_number(*row.discrepancy, 4);
    log << '\n';
    return row.flags.all() ? kSuccess : kPartialFailure;
  });
}

// ---------------------------------------------------------------------------

int run_propagate(const GlobalOptions& g, const PropagateOptions& o, std::ostream& data,
                  std::ostream& log) {
  namespace fs = std::filesystem;
  return guarded(log, [&] {
    const Loaded in = load(g);
    const PhysicalParams& p = in.params;
    const ModelKind model = parse_model_kind(o.model);
    const int n_points = o.grid_points > 0
                             ? o.grid_points
                             : mask_grid_points(p, o.box_factor);
    const Grid1D grid = diffraction_grid(p, n_points, o.box_factor);
    // rho_0 = 0 runs a unit probe at zero density (see run_sweep).
    const double area =
        p.rho_0() > 0.0 ? o.transverse_area : std::numeric_limits<double>::infinity();
    const WaveState initial = p.rho_0() > 0.0 ? init_gaussian(grid, p.rho_0(), p.w_y(), area)
                                              : init_gaussian(grid, 1.0, p.w_y(), 1.0);
    PropagationConfig cfg = laser_pass_config(p, model, o.kinetic, area, o.steps);
    cfg.override_adiabatic_guard = !o.adiabatic_guard;

    std::vector<std::string> written;
    auto snapshot_path = [&](const std::string& name) {
      return (fs::path(o.snapshot_dir) / name).string();
    };
    auto write_snapshot = [&](const WaveState& s, const std::string& path) {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw ConfigError("cannot write snapshot '" + path + "'");
      write_state_csv(f, s, area);
    };
    if (!o.snapshot_steps.empty()) fs::create_directories(o.snapshot_dir);

    WaveState last_good = initial;
    int last_good_step = 0;
    auto observer = [&](const WaveState& s, int n) {
      for (int want : o.snapshot_steps) {
        if (want == n) {
          const std::string path = snapshot_path("snapshot_step" + std::to_string(n) + ".csv");
          write_snapshot(s, path);
          written.push_back(path);
        }
      }
      if (n % 64 == 0) {
        bool finite = true;
        for (const auto& a : s.amplitude) finite &= std::isfinite(a.real()) && std::isfinite(a.imag());
        if (finite) {
          last_good = s;
          last_good_step = n;
        }
      }
    };

    WaveState final_state = initial;
    try {
      final_state = propagate_through_laser(initial, cfg, p, observer);
    } catch (const NumericalBlowup& e) {
      fs::create_directories(o.snapshot_dir);
      const std::string path = snapshot_path("last_good.csv");
      write_snapshot(last_good, path);
      log << "error: " << e.what() << "\nlast good state (step " << last_good_step
          << ") written to " << path << '\n';
      return static_cast<int>(kUsageError);
    }

    const double n0 = norm(initial);
    const double n1 = norm(final_state);
    const double k_unit = 2.0 * effective_wavenumber(p);
    int q_max = o.q_max;
    if (q_max <= 0) q_max = default_q_max(raman_nath_params(p).tau);
    const DiffractionPattern pattern = momentum_spectrum(final_state, k_unit, q_max);

    if (g.format == "json") {
      ordered_json j;
      j["command"] = "propagate";
      j["params"] = params_json(p, in.echo_units);
      j["model"] = std::string(model_kind_name(model));
      j["kinetic"] = o.kinetic;
      j["steps"] = cfg.n_steps;
      j["dt"] = cfg.dt;
      j["grid"] = {{"n_points", grid.size()}, {"y_min", grid.y_min()}, {"y_max", grid.y_max()}};
      j["initial_norm"] = n0;
      j["final_norm"] = n1;
      j["norm_relative_drift"] = (n1 - n0) / n0;
      j["spectrum"] = pattern_json(pattern);
      j["snapshots"] = written;
      emit(g, dump(j), data);
    } else {
      std::ostringstream csv;
      csv << "q,P\n";
      for (int q = -q_max; q <= q_max; ++q) csv << q << ',' << csv_number(pattern.probability(q)) << '\n';
      emit(g, csv.str(), data);
    }
    log << "steps = " << cfg.n_steps << ", norm drift = " << format_number((n1 - n0) / n0, 3) << '\n';
    return static_cast<int>(kSuccess);
  });
}

// ---------------------------------------------------------------------------

int run_bloch(const GlobalOptions& g, const BlochOptions& o, std::ostream& data,
              std::ostream& log) {
  return guarded(log, [&] {
    const Loaded in = load(g);
    const PhysicalParams& p = in.params;
    if (o.steps < 1) throw ConfigError("--steps must be >= 1");
    if (o.field != "corrected" && o.field != "bare") {
      throw ConfigError("--field must be corrected or bare");
    }
    const double rho = o.density ? field_to_cgs(in.file, "rho_0", *o.density) : p.rho_0();
    const double delta = o.detuning.value_or(detuning(p));
    const BlochRates rates{o.gamma_l, o.gamma_t};
    const std::complex<double> drive =
        local_drive({o.drive_re, o.drive_im}, p, rho, o.field == "corrected");
    BlochState init;
    init.coherence = {o.r0_re, o.r0_im};
    init.inversion = o.w0;

    const auto traj =
        integrate(init, [drive](double) { return drive; }, delta, rates, o.dt, o.steps);
    const BlochState& last = traj.back();

    std::optional<BlochState> steady;
    std::optional<double> residual;
    if (rates.gamma_l > 0.0 && rates.gamma_t > 0.0) {
      steady = steady_state(drive, delta, rates);
      residual = std::max(std::abs(last.coherence - steady->coherence),
                          std::abs(last.inversion - steady->inversion));
    }
    double w_min = traj.front().inversion, w_max = w_min;
    for (const auto& s : traj) {
      w_min = std::min(w_min, s.inversion);
      w_max = std::max(w_max, s.inversion);
    }

    if (g.format == "json") {
      ordered_json j;
      j["command"] = "bloch";
      j["params"] = params_json(p, in.echo_units);
      j["drive"] = {{"re", drive.real()}, {"im", drive.imag()}, {"field", o.field}};
      j["detuning"] = delta;
      j["rates"] = {{"gamma_l", rates.gamma_l}, {"gamma_t", rates.gamma_t}};
      j["dt"] = o.dt;
      j["steps"] = o.steps;
      ordered_json t = ordered_json::array();
      for (const auto& s : traj) t.push_back({s.time, s.coherence.real(), s.coherence.imag(), s.inversion});
      j["trajectory_columns"] = {"t_s", "re_R", "im_R", "W"};
      j["trajectory"] = t;
      j["final"] = {{"re_R", last.coherence.real()}, {"im_R", last.coherence.imag()}, {"W", last.inversion}};
      j["W_min"] = w_min;
      j["W_max"] = w_max;
      if (steady) {
        j["steady_state"] = {{"re_R", steady->coherence.real()},
                             {"im_R", steady->coherence.imag()},
                             {"W", steady->inversion}};
        j["steady_state_residual"] = *residual;
      } else {
        j["steady_state"] = nullptr;
        j["steady_state_residual"] = nullptr;
      }
      emit(g, dump(j), data);
    } else {
      std::ostringstream csv;
      csv << "t_s,re_R,im_R,W\n";
      for (const auto& s : traj) {
        csv << csv_number(s.time) << ',' << csv_number(s.coherence.real()) << ','
            << csv_number(s.coherence.imag()) << ',' << csv_number(s.inversion) << '\n';
      }
      emit(g, csv.str(), data);
    }
    log << "final W = " << format_number(last.inversion, 12) << ", W range [" << format_number(w_min, 10)
        << ", " << format_number(w_max, 10) << "]";
    if (residual) log << ", steady-state residual = " << format_number(*residual, 4);
    log << '\n';
    return static_cast<int>(kSuccess);
  });
}

// ---------------------------------------------------------------------------

int run_sweep(const GlobalOptions& g, const SweepOptions& o, std::ostream& data,
              std::ostream& log) {
  return guarded(log, [&] {
    const auto started = std::chrono::steady_clock::now();
    const Loaded in = load(g);
    if (o.axis.empty()) throw ConfigError("--axis is required");
    if (!is_param_field(o.axis)) throw ConfigError("--axis '" + o.axis + "' is not a parameter");
    if (o.values.empty()) throw ConfigError("--values must list at least one value");

    SweepSpec spec{in.params, o.axis, {}, {}};
    for (double v : o.values) spec.values.push_back(field_to_cgs(in.file, o.axis, v));
    spec.paths = parse_paths(o.paths);
    spec.q_max = o.q_max;
    spec.grid_points = o.grid_points;
    spec.box_factor = o.box_factor;
    spec.transverse_area = o.transverse_area;
    spec.propagator_steps = o.propagator_steps;
    spec.threads = g.threads;
    const int q_max = resolve_sweep_q_max(spec);
    spec.q_max = q_max;

    std::vector<SweepRow> rows;
    try {
      rows = densebeam::run_sweep(spec);
    } catch (const SweepError& e) {
      log << "error: " << e.what() << '\n';
      return static_cast<int>(kUsageError);
    }

    const std::vector<std::pair<const char*, std::optional<DiffractionPattern> SweepRow::*>> paths{
        {"analytic", &SweepRow::analytic},
        {"numeric", &SweepRow::numeric},
        {"propagator", &SweepRow::propagator}};
    const bool selected[3] = {spec.paths.analytic, spec.paths.numeric, spec.paths.propagator};

    // CSV: symmetric orders folded, P_q for q >= 0.
    std::ostringstream csv;
    csv << o.axis << ",tau";
    for (int k = 0; k < 3; ++k) {
      if (!selected[k]) continue;
      for (int q = 0; q <= q_max; ++q) {
        csv << ',' << (spec.paths.count() > 1 ? std::string(paths[k].first) + "_" : std::string()) << "P_" << q;
      }
    }
    csv << ",discrepancy,adiabatic_ok,pole_ok,broad_ok,error\n";
    const Unit echo_unit = in.echo_units == UnitSystem::si ? si_unit_of(o.axis) : cgs_unit_of(o.axis);
    int flagged = 0;
    for (const auto& r : rows) {
      if (!r.ok() || !r.flags.all()) ++flagged;
      csv << csv_number(convert_units(r.value, cgs_unit_of(o.axis), echo_unit)) << ','
          << (r.tau ? csv_number(*r.tau) : "nan");
      for (int k = 0; k < 3; ++k) {
        if (!selected[k]) continue;
        const auto& pat = r.*(paths[k].second);
        for (int q = 0; q <= q_max; ++q) csv << ',' << (pat ? csv_number(pat->probability(q)) : "nan");
      }
      std::string err = r.error;
      for (auto& c : err) {
        if (c == ',' || c == '\n' || c == '"') c = ';';
      }
      csv << ',' << (r.discrepancy ? csv_number(*r.discrepancy) : "nan") << ','
          << (r.flags.adiabatic ? "true" : "false") << ',' << (r.flags.pole_distance ? "true" : "false")
          << ',' << (r.flags.broadness ? "true" : "false") << ',' << err << '\n';
    }

    ordered_json report;
    report["command"] = "sweep";
    ordered_json spec_echo;
    spec_echo["axis"] = o.axis;
    spec_echo["values"] = o.values;
    spec_echo["paths"] = o.paths;
    spec_echo["q_max"] = q_max;
    spec_echo["grid_points"] = o.grid_points;
    spec_echo["box_factor"] = o.box_factor;
    spec_echo["transverse_area"] = o.transverse_area;
    spec_echo["propagator_steps"] = o.propagator_steps;
    report["spec"] = spec_echo;
    report["params"] = params_json(in.params, in.echo_units);
    ordered_json jrows = ordered_json::array();
    double worst = 0.0;
    int valid = 0;
    for (const auto& r : rows) {
      ordered_json jr;
      jr["value"] = convert_units(r.value, cgs_unit_of(o.axis), echo_unit);
      jr["tau"] = r.tau ? ordered_json(*r.tau) : ordered_json(nullptr);
      jr["g0"] = r.g0 ? ordered_json(*r.g0) : ordered_json(nullptr);
      jr["v0_rho0"] = r.v0_rho0 ? ordered_json(*r.v0_rho0) : ordered_json(nullptr);
      for (int k = 0; k < 3; ++k) {
        const auto& pat = r.*(paths[k].second);
        if (pat) jr[paths[k].first] = pattern_json(*pat);
      }
      jr["discrepancy"] = r.discrepancy ? ordered_json(*r.discrepancy) : ordered_json(nullptr);
      jr["flags"] = {{"adiabatic", r.flags.adiabatic},
                     {"pole_distance", r.flags.pole_distance},
                     {"broadness", r.flags.broadness}};
      jr["error"] = r.error;
      jrows.push_back(jr);
      if (r.ok() && r.flags.all()) {
        ++valid;
        if (r.discrepancy) worst = std::max(worst, *r.discrepancy);
      }
    }
    report["rows"] = jrows;
    report["summary"] = {{"points", rows.size()},
                         {"valid_points", valid},
                         {"flagged_points", flagged},
                         {"max_discrepancy_valid", worst}};
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report["meta"] = {{"program", "densebeam"}, {"version", kVersion}, {"threads", g.threads},
                      {"elapsed_s", elapsed}};

    if (g.format == "csv") {
      emit(g, csv.str(), data);
      std::string report_path = o.report;
      if (report_path.empty() && !g.out.empty()) {
        report_path = std::filesystem::path(g.out).replace_extension(".json").string();
      }
      if (!report_path.empty()) {
        std::ofstream f(report_path, std::ios::binary);
        if (!f) throw ConfigError("cannot write report '" + report_path + "'");
        f << dump(report) << '\n';
      }
    } else {
      emit(g, dump(report), data);
    }
    log << rows.size() << " points, " << flagged << " flagged\n";
    return flagged == 0 ? static_cast<int>(kSuccess) : static_cast<int>(kPartialFailure);
  });
}

// ---------------------------------------------------------------------------

int main_entry(int argc, const char* const* argv, std::ostream& data, std::ostream& log) {
  CLI::App app{"densebeam: local-field atom optics of a dense Bose gas in a standing light wave"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  GlobalOptions g;
  app.add_option("--params", g.params_path, "Parameter file (key = value, with units = si|cgs)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "Output path (default: stdout)");
  app.add_option("--units", g.units, "Unit system for echoed parameters")
      ->check(CLI::IsMember({"si", "cgs"}));
  app.add_option("--threads", g.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--set", g.overrides, "Override a parameter, key=value (file units)");

  OpticsOptions optics;
  auto* c_optics = app.add_subcommand("optics", "Polarizability, susceptibility, index, local detuning");
  c_optics->add_option("--density", optics.density, "Density to evaluate at (default rho_0)");
  c_optics->add_option("--saturation", optics.saturation, "Saturation parameter s");

  ValidityOptions validity;
  auto* c_validity = app.add_subcommand("validity", "Approximation validity checks");
  c_validity->add_option("--saturation", validity.saturation, "Saturation parameter s");
  c_validity->add_option("--contact-threshold", validity.contact_threshold);
  c_validity->add_option("--adiabatic-threshold", validity.adiabatic_threshold);

  DiffractOptions diffract;
  auto* c_diffract = app.add_subcommand("diffract", "Raman-Nath diffraction pattern");
  c_diffract->add_option("--paths", diffract.paths, "analytic,numeric,propagator or all");
  c_diffract->add_option("--q-max", diffract.q_max, "Highest order (0: ceil|tau| + 30)");
  c_diffract->add_option("--grid-points", diffract.grid_points, "0: enough points to resolve the orders");
  c_diffract->add_option("--box-factor", diffract.box_factor, "Grid length / w_y");
  c_diffract->add_option("--transverse-area", diffract.transverse_area, "cm^2");
  c_diffract->add_option("--propagator-steps", diffract.propagator_steps);
  c_diffract->add_flag("--kinetic", diffract.kinetic, "Keep the kinetic term in the propagator path");
  c_diffract->add_option("--model", diffract.model)->check(CLI::IsMember({"full", "single", "gp", "wallis"}));

  PropagateOptions prop;
  std::string kinetic = "on";
  auto* c_prop = app.add_subcommand("propagate", "Split-step propagation through the standing wave");
  c_prop->add_option("--model", prop.model)->check(CLI::IsMember({"full", "single", "gp", "wallis"}));
  c_prop->add_option("--kinetic", kinetic, "on | off")->check(CLI::IsMember({"on", "off"}));
  c_prop->add_option("--steps", prop.steps, "Time steps (0: automatic)");
  c_prop->add_option("--grid-points", prop.grid_points, "0: enough points to resolve the orders");
  c_prop->add_option("--box-factor", prop.box_factor, "Grid length / w_y (>= 6)");
  c_prop->add_option("--transverse-area", prop.transverse_area, "cm^2");
  c_prop->add_option("--q-max", prop.q_max);
  c_prop->add_option("--snapshot-steps", prop.snapshot_steps, "Step indices to snapshot")->delimiter(',');
  c_prop->add_option("--snapshot-dir", prop.snapshot_dir);
  bool no_guard = false;
  c_prop->add_flag("--no-adiabatic-guard", no_guard);

  BlochOptions bloch;
  auto* c_bloch = app.add_subcommand("bloch", "Optical Bloch trajectory");
  c_bloch->add_option("--drive-re", bloch.drive_re, "Re of macroscopic Rabi amplitude, rad/s");
  c_bloch->add_option("--drive-im", bloch.drive_im, "Im of macroscopic Rabi amplitude, rad/s");
  c_bloch->add_option("--detuning", bloch.detuning, "rad/s (default from params)");
  c_bloch->add_option("--gamma-l", bloch.gamma_l, "rad/s");
  c_bloch->add_option("--gamma-t", bloch.gamma_t, "rad/s");
  c_bloch->add_option("--dt", bloch.dt, "s")->required();
  c_bloch->add_option("--steps", bloch.steps)->required();
  c_bloch->add_option("--w0", bloch.w0, "Initial inversion");
  c_bloch->add_option("--r0-re", bloch.r0_re);
  c_bloch->add_option("--r0-im", bloch.r0_im);
  c_bloch->add_option("--field", bloch.field, "corrected | bare")->check(CLI::IsMember({"corrected", "bare"}));
  c_bloch->add_option("--density", bloch.density, "Density for the local-field factor (default rho_0)");

  SweepOptions sweep;
  std::vector<double> range;
  auto* c_sweep = app.add_subcommand("sweep", "Single-axis parameter sweep");
  c_sweep->add_option("--axis", sweep.axis, "Parameter field to vary");
  c_sweep->add_option("--values", sweep.values, "Comma-separated values (file units)")->delimiter(',');
  c_sweep->add_option("--range", range, "start,stop,count (linear)")->delimiter(',')->expected(3);
  c_sweep->add_option("--paths", sweep.paths, "analytic,numeric,propagator or all");
  c_sweep->add_option("--q-max", sweep.q_max);
  c_sweep->add_option("--grid-points", sweep.grid_points, "0: enough points to resolve the orders");
  c_sweep->add_option("--box-factor", sweep.box_factor);
  c_sweep->add_option("--transverse-area", sweep.transverse_area);
  c_sweep->add_option("--propagator-steps", sweep.propagator_steps);
  c_sweep->add_option("--report", sweep.report, "JSON report path for csv output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    data << out.str();
    log << err.str();
    return code == 0 ? kSuccess : kUsageError;
  }

  if (*c_optics) return run_optics(g, optics, data, log);
  if (*c_validity) return run_validity(g, validity, data, log);
  if (*c_diffract) return run_diffract(g, diffract, data, log);
  if (*c_prop) {
    prop.kinetic = kinetic == "on";
    prop.adiabatic_guard = !no_guard;
    return run_propagate(g, prop, data, log);
  }
  if (*c_bloch) return run_bloch(g, bloch, data, log);
  if (*c_sweep) {
    if (!range.empty()) {
      const double n = range[2];
      if (n < 1 || n != std::floor(n)) {
        log << "error: --range count must be a positive integer\n";
        return kUsageError;
      }
      const int count = static_cast<int>(n);
      for (int i = 0; i < count; ++i) {
        sweep.values.push_back(count == 1 ? range[0]
                                          : range[0] + (range[1] - range[0]) * i / (count - 1));
      }
    }
    return run_sweep(g, sweep, data, log);
  }
  return kUsageError;
}

}  // namespace densebeam::app
