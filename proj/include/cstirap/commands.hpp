#pragma once

// Command implementations behind the cstirap executable. Every command
// computes first and writes its artifacts only when everything succeeded.
//
// Exit codes: 0 success, 1 configuration error, 2 integration failure,
// 3 I/O error. Failures print one diagnostic line on `err`.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "cstirap/config.hpp"

namespace cstirap::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kIntegrationError = 2, kIoError = 3 };

struct Invocation {
  std::optional<std::filesystem::path> config_file;
  std::optional<std::string> preset;
  std::vector<std::string> sets;  // "key=value"
  std::optional<std::filesystem::path> output_dir;
  bool svg = false;
  std::optional<unsigned> workers;
};

/// Config document + overrides described by the invocation.
[[nodiscard]] RunConfig resolve(const Invocation& inv);

[[nodiscard]] nlohmann::json simulate_report_json(const RunConfig& cfg, const TransferReport& report);
[[nodiscard]] std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepCell>& cells);
[[nodiscard]] nlohmann::json sweep_json(const RunConfig& cfg, const SweepSpec& spec, const std::vector<SweepCell>& cells);
[[nodiscard]] nlohmann::json optimize_json(const RunConfig& cfg, const OptimizeSpec& spec, const OptimizeResult& result);

/// darkstate.json, adiabaticity.json and decay_prediction.json contents.
struct AnalyzeOutput {
  nlohmann::json darkstate;
  nlohmann::json adiabaticity;
  nlohmann::json decay_prediction;
};
[[nodiscard]] AnalyzeOutput analyze(const RunConfig& cfg);

int cmd_simulate(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_sweep(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_optimize(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_analyze(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_presets_list(std::ostream& out, std::ostream& err);
/// Writes the preset as a config document to `file`, or to `out` when empty.
int cmd_presets_export(const std::string& name, const std::optional<std::filesystem::path>& file, std::ostream& out,
                       std::ostream& err);
int cmd_config_validate(const Invocation& inv, std::ostream& out, std::ostream& err);

}  // namespace cstirap::cli
