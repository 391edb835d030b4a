#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include "densebeam/effective_models.hpp"
#include "densebeam/fft.hpp"
#include "densebeam/pattern.hpp"
#include "densebeam/units.hpp"

namespace densebeam {

/// Uniform periodic grid on [y_min, y_max); point n_points wraps to 0.
class Grid1D {
 public:
  /// n_points must be a power of two >= 16 and y_max > y_min.
  Grid1D(int n_points, double y_min, double y_max);

  int size() const noexcept { return n_; }
  double y_min() const noexcept { return y_min_; }
  double y_max() const noexcept { return y_max_; }
  double length() const noexcept { return y_max_ - y_min_; }
  double spacing() const noexcept { return (y_max_ - y_min_) / n_; }
  double coordinate(int i) const noexcept { return y_min_ + i * spacing(); }

  /// Signed angular wavenumber of DFT mode j (Nyquist mapped to -n/2).
  double wavenumber(int j) const noexcept;

 private:
  int n_;
  double y_min_;
  double y_max_;
};

/// Symmetric grid [-L/2, L/2) whose length L is the smallest multiple of
/// 2 pi / k_unit that is >= min_length.
Grid1D commensurate_grid(int n_points, double min_length, double k_unit);

/// Ground-state matter-wave amplitude psi_1(y). |psi|^2 / transverse_area is
/// the 3D density in cm^-3.
struct WaveState {
  Grid1D grid;
  std::vector<std::complex<double>> amplitude;
  double time = 0.0;  // s
};

/// |Omega+|^2 (rad^2/s^2) as a function of (y in cm, t in s).
using LaserProfile = std::function<double(double, double)>;

struct PropagationConfig {
  double dt = 0.0;
  int n_steps = 1;
  bool kinetic_enabled = true;
  ModelKind model = ModelKind::full;
  LaserProfile laser_profile;
  double transverse_area = 1.0;        // cm^2
  bool override_adiabatic_guard = false;
  double adiabatic_threshold = 10.0;
  int nan_check_interval = 64;
};

/// psi = sqrt(rho0 A) exp(-y^2 / (2 w_y^2)), zero phase. Requires w_y < L/6.
WaveState init_gaussian(const Grid1D& grid, double rho0, double w_y, double transverse_area);

/// Same profile without the boundary-clearance check. Phase-mask runs never
/// transport amplitude across the boundary, so truncation there is harmless.
WaveState sample_gaussian(const Grid1D& grid, double rho0, double w_y, double transverse_area);

/// Trapezoidal integral of |psi|^2 over the periodic grid.
double norm(const WaveState& state);

/// Strang split-step integrator bound to one grid. Each step applies
/// exp(-i V(t+dt) dt/2hbar) exp(-i T dt/hbar) exp(-i V(t) dt/2hbar), with V
/// re-evaluated from the current |psi|^2 before each potential half.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const Grid1D& grid, PhysicalParams params);

  void step(WaveState& state, const PropagationConfig& config);

 private:
  void apply_potential(WaveState& state, const PropagationConfig& config, double t,
                       double fraction) const;
  void apply_kinetic(WaveState& state, double dt);

  Grid1D grid_;
  PhysicalParams params_;
  Fft1D fft_;
  double cached_dt_ = 0.0;
  std::vector<std::complex<double>> kinetic_phase_;
};

/// One Strang step. Checks the adiabatic guard at the current peak density
/// unless overridden; throws NumericalBlowup on a non-finite result.
WaveState step(const WaveState& state, const PropagationConfig& config,
               const PhysicalParams& params);

/// |Omega0|^2 exp(-(v_g t)^2 / w_L^2) cos^2(n k_L y).
LaserProfile standing_wave_profile(const PhysicalParams& params);

/// Smallest step count (>= 2048) that keeps max|V| dt / hbar <= 0.05 rad.
int default_laser_steps(const PhysicalParams& params, ModelKind model,
                        double z_half_range_factor = 4.0);

/// Config for a pass through the standing wave: z = v_g t uniformly sampled on
/// [-f w_L, f w_L] with n_steps steps (0 selects default_laser_steps).
PropagationConfig laser_pass_config(const PhysicalParams& params, ModelKind model,
                                    bool kinetic_enabled, double transverse_area,
                                    int n_steps = 0, double z_half_range_factor = 4.0);

using StepObserver = std::function<void(const WaveState&, int)>;

/// Steps `state` through the laser described by `config`, entering at
/// t = -n_steps dt / 2 so the pulse is centred. The z-range must cover
/// [-4 w_L, 4 w_L]. The observer, if any, sees the state after every step
/// (and the entry state as step 0).
WaveState propagate_through_laser(const WaveState& state, const PropagationConfig& config,
                                  const PhysicalParams& params,
                                  const StepObserver& observer = {});

/// Spectral power binned into windows of width k_unit centred on q k_unit,
/// normalized over all modes. The grid length must be an integer multiple of
/// 2 pi / k_unit; otherwise ConfigError names the nearest compatible length.
DiffractionPattern momentum_spectrum(const WaveState& state, double k_unit, int q_max);

/// CSV with header `y_cm,re_psi,im_psi,density`.
void write_state_csv(std::ostream& out, const WaveState& state, double transverse_area);

}  // namespace densebeam
