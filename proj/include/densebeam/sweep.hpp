#pragma once

#include <optional>
#include <string>
#include <vector>

#include "densebeam/diffraction.hpp"
#include "densebeam/effective_models.hpp"
#include "densebeam/errors.hpp"
#include "densebeam/pattern.hpp"
#include "densebeam/units.hpp"

namespace densebeam {

struct SweepPaths {
  bool analytic = true;
  bool numeric = false;
  bool propagator = false;

  int count() const { return int(analytic) + int(numeric) + int(propagator); }
};

/// Parses a comma list of analytic | numeric | propagator | all.
SweepPaths parse_paths(const std::string& list);

struct SweepSpec {
  PhysicalParams base;
  std::string axis;             // a PhysicalParams field name
  std::vector<double> values;   // CGS
  SweepPaths paths;
  int q_max = 0;                // 0: ceil(max |tau|) + 30 over the points
  int grid_points = 0;          // 0: mask_grid_points per point
  double box_factor = kMaskBoxFactor;
  double transverse_area = 1.0;
  int propagator_steps = 2048;  // z samples for the propagator path
  bool kinetic_enabled = false;
  ModelKind model = ModelKind::full;
  int threads = 1;
};

struct ValidityFlags {
  bool adiabatic = false;      // |Delta_l(rho0)| / gamma > 10
  bool pole_distance = false;  // |1 + V0 rho0| >= 0.1
  bool broadness = false;      // w_y >= 10 * 2 pi / (n k_L)
  bool all() const { return adiabatic && pole_distance && broadness; }
};

struct SweepRow {
  double value = 0.0;
  std::optional<double> tau;
  std::optional<double> g0;
  std::optional<double> v0_rho0;
  std::optional<DiffractionPattern> analytic;
  std::optional<DiffractionPattern> numeric;
  std::optional<DiffractionPattern> propagator;
  std::optional<double> discrepancy;  // max over q and path pairs
  ValidityFlags flags;
  std::string error;  // empty when the point evaluated

  bool ok() const { return error.empty(); }
};

class SweepError : public Error {
 public:
  using Error::Error;
};

/// Validity flags of one parameter point.
ValidityFlags validity_flags(const PhysicalParams& p);

/// Evaluates every point in input order. Points run in parallel across
/// `threads` workers; each point is computed by one worker in a fixed
/// sequence, so results do not depend on the thread count. Throws SweepError
/// if no point evaluates.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// q_max the sweep actually uses.
int resolve_sweep_q_max(const SweepSpec& spec);

}  // namespace densebeam
