#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace densebeam::app {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kPartialFailure = 2 };

struct GlobalOptions {
  std::string params_path;
  std::string format = "json";  // json | csv
  std::string out;              // empty: stdout
  std::string units;            // echo units; empty: the file's
  int threads = 1;
  std::vector<std::string> overrides;  // key=value, in the file's units
};

struct OpticsOptions {
  std::optional<double> density;  // default rho_0
  double saturation = 1.0;
};

struct ValidityOptions {
  double saturation = 1.0;
  double contact_threshold = 10.0;
  double adiabatic_threshold = 10.0;
};

struct DiffractOptions {
  std::string paths = "analytic";
  int q_max = 0;  // 0: ceil(|tau|) + 30
  int grid_points = 0;  // 0: enough points to resolve the orders
  double box_factor = 8.0;
  double transverse_area = 1.0;
  int propagator_steps = 2048;
  bool kinetic = false;
  std::string model = "full";
};

struct PropagateOptions {
  std::string model = "full";
  bool kinetic = true;
  int steps = 0;        // 0: default_laser_steps
  int grid_points = 0;  // 0: resolving_grid_points
  double box_factor = 8.0;
  double transverse_area = 1.0;
  int q_max = 0;
  std::vector<int> snapshot_steps;
  std::string snapshot_dir = ".";
  bool adiabatic_guard = true;
};

struct BlochOptions {
  double drive_re = 0.0;  // macroscopic Rabi amplitude, rad/s
  double drive_im = 0.0;
  std::optional<double> detuning;  // rad/s; default from params
  double gamma_l = 0.0;
  double gamma_t = 0.0;
  double dt = 0.0;
  int steps = 0;
  double w0 = -1.0;
  double r0_re = 0.0;
  double r0_im = 0.0;
  std::string field = "corrected";  // corrected | bare
  std::optional<double> density;    // default rho_0
};

struct SweepOptions {
  std::string axis;
  std::vector<double> values;  // in the file's units
  std::string paths = "analytic";
  int q_max = 0;
  int grid_points = 0;  // 0: enough points to resolve the orders
  double box_factor = 8.0;
  double transverse_area = 1.0;
  int propagator_steps = 2048;
  std::string report;  // JSON report path for csv runs; default <out>.json
};

// Each command writes its data to GlobalOptions::out (or `data` when out is
// empty) and a human-readable summary to `log`. Errors in configuration are
// reported on `log` and give kUsageError.
int run_optics(const GlobalOptions& g, const OpticsOptions& o, std::ostream& data, std::ostream& log);
int run_validity(const GlobalOptions& g, const ValidityOptions& o, std::ostream& data, std::ostream& log);
int run_diffract(const GlobalOptions& g, const DiffractOptions& o, std::ostream& data, std::ostream& log);
int run_propagate(const GlobalOptions& g, const PropagateOptions& o, std::ostream& data, std::ostream& log);
int run_bloch(const GlobalOptions& g, const BlochOptions& o, std::ostream& data, std::ostream& log);
int run_sweep(const GlobalOptions& g, const SweepOptions& o, std::ostream& data, std::ostream& log);

/// Full command-line entry point (argv[0] is the program name).
int main_entry(int argc, const char* const* argv, std::ostream& data, std::ostream& log);

}  // namespace densebeam::app
