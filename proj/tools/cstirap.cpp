// cstirap: simulate, sweep, optimize and analyze c-STIRAP chains.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cstirap/commands.hpp"

namespace {

void add_run_options(CLI::App* cmd, cstirap::cli::Invocation& inv, std::string& config, std::string& output,
                     unsigned& workers) {
  cmd->add_option("-c,--config", config, "JSON run configuration");
  cmd->add_option("-p,--preset", inv.preset, "built-in scenario (five-level, rb2-seven)");
  cmd->add_option("-s,--set", inv.sets, "override key=value (repeatable)")->take_all();
  cmd->add_option("-o,--output", output, "output directory");
  cmd->add_option("-j,--workers", workers, "worker threads for sweep/optimize (default CSTIRAP_WORKERS or cores)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cstirap::cli;
  CLI::App app{"Chainwise STIRAP simulation in lossy multilevel systems"};
  app.require_subcommand(1);

  Invocation inv;
  std::string config, output, export_file;
  unsigned workers = 0;
  std::string export_name;

  auto* simulate = app.add_subcommand("simulate", "propagate the density matrix; write timeseries.csv, report.json");
  add_run_options(simulate, inv, config, output, workers);
  simulate->add_flag("--svg", inv.svg, "also write populations.svg");
  auto* sweep = app.add_subcommand("sweep", "full-factorial parameter sweep; write sweep.csv, sweep.json");
  add_run_options(sweep, inv, config, output, workers);
  auto* optimize = app.add_subcommand("optimize", "Nelder-Mead search for maximal efficiency; write optimize.json");
  add_run_options(optimize, inv, config, output, workers);
  auto* analyze = app.add_subcommand("analyze", "dark states, adiabaticity and decay prediction without propagation");
  add_run_options(analyze, inv, config, output, workers);

  auto* presets = app.add_subcommand("presets", "built-in scenarios");
  presets->require_subcommand(1);
  auto* list = presets->add_subcommand("list", "list preset names");
  auto* exp = presets->add_subcommand("export", "print a preset as a config document");
  exp->add_option("name", export_name, "preset name")->required();
  exp->add_option("-o,--output", export_file, "write to this file instead of stdout");

  auto* cfg = app.add_subcommand("config", "configuration utilities");
  cfg->require_subcommand(1);
  auto* validate = cfg->add_subcommand("validate", "load and check a configuration");
  add_run_options(validate, inv, config, output, workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "cstirap: usage error: " << e.what() << '\n';
    return kConfigError;
  }

  if (!config.empty()) inv.config_file = config;
  if (!output.empty()) inv.output_dir = output;
  if (workers > 0) inv.workers = workers;

  if (*simulate) return cmd_simulate(inv, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(inv, std::cout, std::cerr);
  if (*optimize) return cmd_optimize(inv, std::cout, std::cerr);
  if (*analyze) return cmd_analyze(inv, std::cout, std::cerr);
  if (*list) return cmd_presets_list(std::cout, std::cerr);
  if (*exp) {
    return cmd_presets_export(export_name, export_file.empty() ? std::nullopt : std::optional<std::filesystem::path>(export_file),
                              std::cout, std::cerr);
  }
  if (*validate) return cmd_config_validate(inv, std::cout, std::cerr);
  return kConfigError;
}
