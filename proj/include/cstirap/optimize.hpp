#pragma once

// Full-factorial parameter sweeps and Nelder-Mead optimization of pulse
// parameters for maximal transfer efficiency.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cstirap/analysis.hpp"
#include "cstirap/scenarios.hpp"

namespace cstirap {

/// Worker count from CSTIRAP_WORKERS, falling back to hardware concurrency.
[[nodiscard]] unsigned default_workers();

/// Runs task(i) for i in [0, count) on up to `workers` threads. Results must
/// be written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

struct SweepAxis {
  std::string parameter;  // see set_parameter
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  unsigned workers = 0;  // 0: default_workers()
};

struct SweepCell {
  std::vector<double> values;  // one per axis, in axis order
  bool ok = false;
  std::string error;
  TransferReport report;
};

void validate_sweep(const SweepSpec& spec);

/// Cells in row-major order over the axes (last axis fastest). Per-cell
/// failures are recorded in the cell and do not stop the sweep.
[[nodiscard]] std::vector<SweepCell> sweep(const ScenarioPreset& preset, const SweepSpec& spec);

struct FreeParameter {
  std::string name;  // see set_parameter
  double start = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double initial_step = 0.0;  // 0: 10% of (upper - lower)
};

struct OptimizeSpec {
  std::vector<FreeParameter> parameters;
  double tolerance = 1e-4;  // spread of efficiencies across the simplex
  std::size_t max_evaluations = 500;
  std::optional<double> rabi_cap;  // upper bound on max Omega_eff, s^-1
  unsigned workers = 0;
};

struct OptimizeResult {
  std::vector<double> best;        // parameter values, in OptimizeSpec::parameters order
  double best_objective = 0.0;     // efficiency minus constraint penalty
  TransferReport report;           // at the best point
  std::vector<double> incumbents;  // best objective after each iteration
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  bool converged = false;
  bool budget_exhausted = false;
};

void validate_optimize(const OptimizeSpec& spec);

/// Objective: transfer efficiency; points violating rabi_cap score
/// -1 - relative excess without being simulated; failed integrations score -2.
[[nodiscard]] OptimizeResult optimize(const ScenarioPreset& preset, const OptimizeSpec& spec);

}  // namespace cstirap
