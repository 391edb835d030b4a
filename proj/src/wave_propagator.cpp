#include "densebeam/wave_propagator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "densebeam/constants.hpp"
#include "densebeam/errors.hpp"
#include "densebeam/format.hpp"
#include "densebeam/medium_optics.hpp"

namespace densebeam {

using constants::hbar;
using constants::pi;

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

double peak_density(const WaveState& state, double transverse_area) {
  double peak = 0.0;
  for (const auto& a : state.amplitude) peak = std::max(peak, std::norm(a));
  return peak / transverse_area;
}

void check_finite(const WaveState& state, int step_index) {
  for (std::size_t i = 0; i < state.amplitude.size(); ++i) {
    const auto& a = state.amplitude[i];
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      std::ostringstream msg;
      msg << "non-finite amplitude at grid index " << i << " (y = "
          << state.grid.coordinate(static_cast<int>(i)) << " cm) after step " << step_index
          << ", t = " << state.time << " s; grid n = " << state.grid.size() << " on ["
          << state.grid.y_min() << ", " << state.grid.y_max() << ") cm";
      throw NumericalBlowup(msg.str());
    }
  }
}

void check_adiabatic(const WaveState& state, const PropagationConfig& config,
                     const PhysicalParams& params) {
  if (config.override_adiabatic_guard) return;
  const double rho = peak_density(state, config.transverse_area);
  const double ratio = adiabatic_validity(params, rho);
  if (!adiabatic_valid(ratio, config.adiabatic_threshold)) {
    std::ostringstream msg;
    msg << "adiabatic elimination invalid at peak density " << rho << " cm^-3: |Delta_l|/gamma = "
        << ratio << " <= " << config.adiabatic_threshold;
    throw ConfigError(msg.str());
  }
}

void check_config(const PropagationConfig& config) {
  if (!(config.dt > 0.0)) throw ConfigError("propagation dt must be > 0");
  if (config.n_steps < 1) throw ConfigError("propagation n_steps must be >= 1");
  if (!(config.transverse_area > 0.0)) throw ConfigError("transverse_area must be > 0");
  if (!config.laser_profile) throw ConfigError("propagation config has no laser profile");
}

}  // namespace

Grid1D::Grid1D(int n_points, double y_min, double y_max)
    : n_(n_points), y_min_(y_min), y_max_(y_max) {
  if (n_points < 16 || !is_power_of_two(n_points)) {
    throw ConfigError("grid size must be a power of two >= 16, got " + std::to_string(n_points));
  }
  if (!(y_max > y_min) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw ConfigError("grid requires finite y_max > y_min");
  }
}

double Grid1D::wavenumber(int j) const noexcept {
  const int m = j < n_ / 2 ? j : j - n_;
  return 2.0 * pi * m / length();
}

Grid1D commensurate_grid(int n_points, double min_length, double k_unit) {
  if (!(k_unit > 0.0) || !(min_length > 0.0)) {
    throw ConfigError("commensurate_grid needs positive length and k_unit");
  }
  const double period = 2.0 * pi / k_unit;
  const double cells = std::ceil(min_length / period * (1.0 - 1e-12));
  const double length = std::max(cells, 1.0) * period;
  return Grid1D(n_points, -0.5 * length, 0.5 * length);
}

WaveState sample_gaussian(const Grid1D& grid, double rho0, double w_y, double transverse_area) {
  if (!(rho0 >= 0.0) || !(w_y > 0.0) || !(transverse_area > 0.0)) {
    throw ConfigError("gaussian state needs rho0 >= 0, w_y > 0, transverse_area > 0");
  }
  WaveState s{grid, std::vector<std::complex<double>>(grid.size()), 0.0};
  const double amp = std::sqrt(rho0 * transverse_area);
  for (int i = 0; i < grid.size(); ++i) {
    const double y = grid.coordinate(i);
    s.amplitude[i] = amp * std::exp(-0.5 * y * y / (w_y * w_y));
  }
  return s;
}

WaveState init_gaussian(const Grid1D& grid, double rho0, double w_y, double transverse_area) {
  if (!(w_y < grid.length() / 6.0)) {
    std::ostringstream msg;
    msg << "packet width w_y = " << w_y << " cm too wide for grid of length " << grid.length()
        << " cm (need w_y < L/6)";
    throw ConfigError(msg.str());
  }
  return sample_gaussian(grid, rho0, w_y, transverse_area);
}

double norm(const WaveState& state) {
  double s = 0.0;
  for (const auto& a : state.amplitude) s += std::norm(a);
  return s * state.grid.spacing();
}

SplitStepPropagator::SplitStepPropagator(const Grid1D& grid, PhysicalParams params)
    : grid_(grid), params_(std::move(params)), fft_(grid.size()) {}

void SplitStepPropagator::apply_potential(WaveState& state, const PropagationConfig& config,
                                          double t, double fraction) const {
  const double h = fraction * config.dt / hbar;
  for (int i = 0; i < grid_.size(); ++i) {
    auto& a = state.amplitude[i];
    const double rabi_sq = config.laser_profile(grid_.coordinate(i), t);
    if (rabi_sq == 0.0) continue;
    const double rho = std::norm(a) / config.transverse_area;
    const double v = effective_potential(config.model, rabi_sq, rho, params_);
    a *= std::polar(1.0, -v * h);
  }
}

void SplitStepPropagator::apply_kinetic(WaveState& state, double dt) {
  if (dt != cached_dt_ || kinetic_phase_.empty()) {
    kinetic_phase_.resize(grid_.size());
    const double c = hbar * dt / (2.0 * params_.mass());
    for (int j = 0; j < grid_.size(); ++j) {
      const double k = grid_.wavenumber(j);
      kinetic_phase_[j] = std::polar(1.0, -c * k * k);
    }
    cached_dt_ = dt;
  }
  fft_.forward(state.amplitude);
  for (int j = 0; j < grid_.size(); ++j) state.amplitude[j] *= kinetic_phase_[j];
  fft_.backward(state.amplitude);
}

void SplitStepPropagator::step(WaveState& state, const PropagationConfig& config) {
  if (state.grid.size() != grid_.size() ||
      static_cast<int>(state.amplitude.size()) != grid_.size()) {
    throw ConfigError("state does not match the propagator grid");
  }
  const double t0 = state.time;
  apply_potential(state, config, t0, 0.5);
  if (config.kinetic_enabled) apply_kinetic(state, config.dt);
  apply_potential(state, config, t0 + config.dt, 0.5);
  state.time = t0 + config.dt;
}

WaveState step(const WaveState& state, const PropagationConfig& config,
               const PhysicalParams& params) {
  check_config(config);
  check_adiabatic(state, config, params);
  SplitStepPropagator prop(state.grid, params);
  WaveState out = state;
  prop.step(out, config);
  check_finite(out, 1);
  return out;
}

LaserProfile standing_wave_profile(const PhysicalParams& params) {
  const double rabi_sq = params.rabi_peak() * params.rabi_peak();
  const double nk = effective_wavenumber(params);
  const double v_g = params.v_g();
  const double w_l = params.w_l();
  return [=](double y, double t) {
    const double z = v_g * t;
    const double c = std::cos(nk * y);
    return rabi_sq * std::exp(-z * z / (w_l * w_l)) * c * c;
  };
}

int default_laser_steps(const PhysicalParams& params, ModelKind model,
                        double z_half_range_factor) {
  const double rabi_sq = params.rabi_peak() * params.rabi_peak();
  const double rate = std::max(std::abs(effective_potential(model, rabi_sq, 0.0, params)),
                               std::abs(effective_potential(model, rabi_sq, params.rho_0(), params))) /
                      hbar;
  const double duration = 2.0 * z_half_range_factor * params.w_l() / params.v_g();
  const double needed = std::ceil(rate * duration / 0.05);
  return static_cast<int>(std::max(2048.0, needed));
}

PropagationConfig laser_pass_config(const PhysicalParams& params, ModelKind model,
                                    bool kinetic_enabled, double transverse_area, int n_steps,
                                    double z_half_range_factor) {
  if (!(z_half_range_factor >= 4.0)) {
    throw ConfigError("laser pass must cover at least [-4 w_L, 4 w_L]");
  }
  PropagationConfig cfg;
  cfg.n_steps = n_steps > 0 ? n_steps : default_laser_steps(params, model, z_half_range_factor);
  cfg.dt = 2.0 * z_half_range_factor * params.w_l() / (params.v_g() * cfg.n_steps);
  cfg.kinetic_enabled = kinetic_enabled;
  cfg.model = model;
  cfg.laser_profile = standing_wave_profile(params);
  cfg.transverse_area = transverse_area;
  return cfg;
}

WaveState propagate_through_laser(const WaveState& state, const PropagationConfig& config,
                                  const PhysicalParams& params, const StepObserver& observer) {
  check_config(config);
  const double span = config.n_steps * config.dt * params.v_g();
  if (span < 8.0 * params.w_l() * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "laser pass covers z-span " << span << " cm; need at least 8 w_L = "
        << 8.0 * params.w_l() << " cm";
    throw ConfigError(msg.str());
  }
  check_adiabatic(state, config, params);

  SplitStepPropagator prop(state.grid, params);
  WaveState cur = state;
  const double t_start = -0.5 * config.n_steps * config.dt;
  cur.time = t_start;
  if (observer) observer(cur, 0);
  for (int n = 1; n <= config.n_steps; ++n) {
    prop.step(cur, config);
    // Re-anchor to avoid drift from repeated dt accumulation.
    cur.time = t_start + n * config.dt;
    if (config.nan_check_interval > 0 && n % config.nan_check_interval == 0) check_finite(cur, n);
    if (observer) observer(cur, n);
  }
  check_finite(cur, config.n_steps);
  return cur;
}

DiffractionPattern momentum_spectrum(const WaveState& state, double k_unit, int q_max) {
  if (!(k_unit > 0.0)) throw ConfigError("k_unit must be > 0");
  if (q_max < 0) throw ConfigError("q_max must be >= 0");
  const Grid1D& grid = state.grid;
  const double modes = grid.length() * k_unit / (2.0 * pi);
  const double rounded = std::round(modes);
  if (rounded < 1.0 || std::abs(modes - rounded) > 1e-9 * std::max(1.0, modes)) {
    const double period = 2.0 * pi / k_unit;
    std::ostringstream msg;
    msg << "grid length " << grid.length() << " cm is not a multiple of 2pi/k_unit = " << period
        << " cm; smallest compatible length >= current is "
        << std::max(1.0, std::ceil(modes)) * period << " cm";
    throw ConfigError(msg.str());
  }
  const long m_per_order = static_cast<long>(rounded);
  const int n = grid.size();

  std::vector<std::complex<double>> spec = state.amplitude;
  Fft1D fft(n);
  fft.forward(spec);

  // Orders reachable on this grid.
  const long q_reach = n / 2 / m_per_order + 1;
  const long q_span = std::max<long>(q_max, q_reach);
  std::vector<double> bins(static_cast<std::size_t>(2 * q_span + 1), 0.0);
  auto add = [&](long m, double power) {
    // Window of order q is [ (q - 1/2) M, (q + 1/2) M ]; boundary modes are shared.
    const long t = 2 * m + m_per_order;
    const long q = floor_div(t, 2 * m_per_order);
    if (t % (2 * m_per_order) == 0) {
      bins[q + q_span] += 0.5 * power;
      bins[q - 1 + q_span] += 0.5 * power;
    } else {
      bins[q + q_span] += power;
    }
  };

  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double power = std::norm(spec[j]);
    total += power;
    if (j == n / 2) {
      add(n / 2, 0.5 * power);
      add(-n / 2, 0.5 * power);
    } else {
      add(j < n / 2 ? j : j - n, power);
    }
  }
  if (!(total > 0.0)) throw ConfigError("momentum_spectrum of a zero field");

  DiffractionPattern pattern(q_max);
  for (int q = -q_max; q <= q_max; ++q) pattern.probability(q) = bins[q + q_span] / total;
  return pattern;
}

void write_state_csv(std::ostream& out, const WaveState& state, double transverse_area) {
  out << "y_cm,re_psi,im_psi,density\n";
  for (int i = 0; i < state.grid.size(); ++i) {
    const auto& a = state.amplitude[i];
    out << csv_number(state.grid.coordinate(i)) << ',' << csv_number(a.real()) << ','
        << csv_number(a.imag()) << ',' << csv_number(std::norm(a) / transverse_area) << '\n';
  }
}

}  // namespace densebeam
