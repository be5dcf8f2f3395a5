#pragma once

// Benchmark systems and the named pulse parameters used by sweeps and the
// optimizer.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cstirap/analysis.hpp"
#include "cstirap/chain_model.hpp"
#include "cstirap/propagator.hpp"

namespace cstirap {

struct ScenarioPreset {
  std::string name;
  std::string description;
  ChainSystem system;
  SimulationGrid grid;
  bool auto_window = true;  // recompute [t_start, t_end] from the envelopes after parameter changes
  std::map<std::string, std::string> provenance;  // field path -> source of its value
};

struct FiveLevelParams {
  double xi = 0.1;           // max Omega_eff / Omega0
  double omega0 = 1e8;       // constant middle couplings, s^-1
  double gamma1 = 1e4;       // loss of g1, s^-1
  double gamma2 = collision_decay_rate(6e-10, 1e14);  // loss of g2, s^-1
  double gamma_excited = 0.0;  // loss of e1 and e2, s^-1
  double width = 1e-6;       // T, s
  double delay = -2e-6;      // tau, s
};

[[nodiscard]] ScenarioPreset preset_five_level(const FiveLevelParams& params = {});
[[nodiscard]] ScenarioPreset preset_rb2_seven_level();

struct PresetInfo {
  std::string name;
  std::string description;
};
[[nodiscard]] std::vector<PresetInfo> preset_catalog();
/// "five-level" or "rb2-seven". Throws ValidationError for unknown names.
[[nodiscard]] ScenarioPreset preset_by_name(std::string_view name);

/// Sets [t_start, t_end] to default_window(system) when auto_window is on.
void refresh_window(ScenarioPreset& preset);

/// Named pulse parameters:
///   "T"        width of every time-dependent envelope, s
///   "tau"      delay of every tanh envelope, s
///   "omega0"   largest constant coupling (others keep their ratio), s^-1
///   "pump_peak", "stokes_peak"  peak of the first / last coupling, s^-1
///   "peak.<i>" peak of coupling i (0-based), s^-1
/// Throws ValidationError for unknown names.
void set_parameter(ScenarioPreset& preset, std::string_view name, double value);
[[nodiscard]] double get_parameter(const ScenarioPreset& preset, std::string_view name);
[[nodiscard]] bool is_parameter(std::string_view name);

struct LinkIntensity {
  std::size_t link = 0;  // coupling index, 0-based
  double dipole = 0.0;   // Debye
  double wavelength = 0.0;  // nm
  double peak_rabi = 0.0;   // s^-1
  double intensity = 0.0;   // W/cm^2
  bool pulsed = false;
};

[[nodiscard]] std::vector<LinkIntensity> intensity_report(const ScenarioPreset& preset);

/// Largest Omega_eff (pump and Stokes in quadrature) over `samples` points of the grid window.
[[nodiscard]] double max_omega_eff(const ScenarioPreset& preset, std::size_t samples = 4001);

struct SimulationResult {
  Trajectory trajectory;
  TransferReport report;
};

/// Density-matrix run from |initial><initial| on the preset grid.
[[nodiscard]] SimulationResult simulate(const ScenarioPreset& preset, const PropagationOptions& options = {});

}  // namespace cstirap
