#pragma once

// JSON run configuration.
//
//   {
//     "preset": "rb2-seven" | "five-level",      exactly one of preset / system
//     "preset_parameters": {"xi": 0.1, "omega0": "1e8 /s", "Gamma1": "1e4 /s",
//                           "Gamma2": "6e4 /s", "gamma": "0 /s"},   five-level only
//     "system": {
//       "levels": [{"label": "g1", "kind": "ground", "loss_rate": "1e4 /s", "detuning": "0 /s"}, ...],
//       "couplings": [{"lower": 0, "dipole": "0.4 D", "wavelength": "780.7 nm",
//                      "drive": {"shape": "tanh_on", "peak": "3e7 /s" | "3 W/cm2",
//                                "width": "1 us", "delay": "-2 us", "center": "0 us"}}, ...],
//       "initial_level": 0, "target_level": 6
//     },
//     "set": {"T": "1 us", "levels.0.loss_rate": "0 /s", "grid.output_points": 501},
//     "grid": {"t_start": "-9 us", "t_end": "9 us", "output_points": 1801,
//              "rel_tol": 1e-10, "abs_tol": 1e-12},
//     "output": {"dir": "out", "timeseries": true, "report": true, "svg": false},
//     "sweep": {"axes": [{"parameter": "T", "values": ["0.5 us", "1 us"]}]},
//     "optimize": {"parameters": [{"name": "T", "start": "1 us", "lower": "0.1 us",
//                                  "upper": "10 us", "step": "0.5 us"}],
//                  "tolerance": 1e-4, "max_evaluations": 500, "rabi_cap": "5e7 /s"},
//     "analyze": {"times": ["-2 us", "0 us", "2 us"]}
//   }
//
// Quantities are numbers in internal units, "<value> <unit>" strings or
// {"value": v, "unit": "us"} objects. Overrides in "set" (and --set on the
// command line) accept pulse parameter names (T, tau, omega0, pump_peak,
// stokes_peak, peak.<i>), five-level preset parameters, or dotted paths into
// the system ("levels.<i>.<field>", "couplings.<i>.drive.<field>", ...) and
// the grid ("grid.<field>").

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "cstirap/optimize.hpp"
#include "cstirap/scenarios.hpp"
#include "cstirap/units.hpp"

namespace cstirap {

struct RunConfig {
  ScenarioPreset scenario;
  std::filesystem::path output_dir = ".";
  bool emit_timeseries = true;
  bool emit_report = true;
  bool emit_svg = false;
  std::optional<SweepSpec> sweep;
  std::optional<OptimizeSpec> optimize;
  std::vector<double> analyze_times;
};

using Override = std::pair<std::string, nlohmann::json>;

/// "key=value" -> override; numeric values become JSON numbers.
[[nodiscard]] Override parse_override(const std::string& text);

/// Builds and validates a run configuration. `extra` overrides are applied
/// after the document's own "set" block. Throws ValidationError (or
/// nlohmann::json::exception) on any configuration problem.
[[nodiscard]] RunConfig load_run_config(const nlohmann::json& doc, const std::vector<Override>& extra = {});

[[nodiscard]] nlohmann::json read_json_file(const std::filesystem::path& path);

[[nodiscard]] double quantity_from_json(const nlohmann::json& value, Dimension dimension);

[[nodiscard]] nlohmann::json system_to_json(const ChainSystem& system);
[[nodiscard]] ChainSystem system_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json grid_to_json(const SimulationGrid& grid);

/// Full config document reproducing the preset ("system" + "grid").
[[nodiscard]] nlohmann::json preset_to_config(const ScenarioPreset& preset);

[[nodiscard]] SweepSpec sweep_from_json(const nlohmann::json& j);
[[nodiscard]] OptimizeSpec optimize_from_json(const nlohmann::json& j);

}  // namespace cstirap
