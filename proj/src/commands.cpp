#include "cstirap/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "cstirap/hamiltonian.hpp"
#include "cstirap/io.hpp"

namespace cstirap::cli {

using nlohmann::json;

namespace {

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "cstirap: I/O error: " << one_line(e.what()) << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "cstirap: I/O error: " << one_line(e.what()) << '\n';
    return kIoError;
  } catch (const ValidationError& e) {
    err << "cstirap: config error: " << one_line(e.what()) << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    err << "cstirap: config error: " << one_line(e.what()) << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "cstirap: integration failure: " << one_line(e.what()) << '\n';
    return kIntegrationError;
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json named_parameters(const ScenarioPreset& preset) {
  json p = json::object();
  for (const char* name : {"T", "tau", "omega0", "pump_peak", "stokes_peak"}) {
    try {
      p[name] = get_parameter(preset, name);
    } catch (const std::exception&) {
    }
  }
  return p;
}

void apply_workers(RunConfig& cfg, const Invocation& inv) {
  if (!inv.workers) return;
  if (cfg.sweep) cfg.sweep->workers = *inv.workers;
  if (cfg.optimize) cfg.optimize->workers = *inv.workers;
}

std::vector<double> analyze_times(const RunConfig& cfg, const std::optional<AdiabaticityMetrics>& metrics) {
  if (!cfg.analyze_times.empty()) return cfg.analyze_times;
  const SimulationGrid& g = cfg.scenario.grid;
  std::vector<double> times;
  constexpr int kSamples = 41;
  for (int i = 0; i < kSamples; ++i) times.push_back(g.t_start + (g.t_end - g.t_start) * i / (kSamples - 1));
  if (metrics) times.push_back(0.5 * (metrics->overlap_start + metrics->overlap_end));
  std::sort(times.begin(), times.end());
  return times;
}

}  // namespace

RunConfig resolve(const Invocation& inv) {
  json doc = inv.config_file ? read_json_file(*inv.config_file) : json::object();
  if (!doc.is_object()) throw ValidationError("config document must be a JSON object");
  if (inv.preset) {
    if (doc.contains("preset") || doc.contains("system"))
      throw ValidationError("--preset conflicts with the scenario given in the config file");
    doc["preset"] = *inv.preset;
  }
  std::vector<Override> overrides;
  for (const std::string& s : inv.sets) overrides.push_back(parse_override(s));
  RunConfig cfg = load_run_config(doc, overrides);
  if (inv.output_dir) cfg.output_dir = *inv.output_dir;
  if (inv.svg) cfg.emit_svg = true;
  apply_workers(cfg, inv);
  return cfg;
}

json simulate_report_json(const RunConfig& cfg, const TransferReport& report) {
  json j = to_json(report, cfg.scenario.system);
  j["scenario"] = cfg.scenario.name;
  j["window_s"] = {cfg.scenario.grid.t_start, cfg.scenario.grid.t_end};
  j["parameters"] = named_parameters(cfg.scenario);
  return j;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepCell>& cells) {
  std::string out;
  for (const SweepAxis& a : spec.axes) out += csv_escape(a.parameter) + ",";
  out += "status,efficiency,total_loss,max_intermediate_ground_peak,message\n";
  for (const SweepCell& c : cells) {
    for (double v : c.values) out += format_number(v) + ",";
    if (c.ok) {
      out += "ok," + format_number(c.report.efficiency.value) + "," + format_number(c.report.total_loss) + "," +
             format_number(c.report.max_intermediate_ground_peak) + ",\n";
    } else {
      out += "failed,,,," + csv_escape(one_line(c.error)) + "\n";
    }
  }
  return out;
}

json sweep_json(const RunConfig& cfg, const SweepSpec& spec, const std::vector<SweepCell>& cells) {
  json axes = json::array();
  for (const SweepAxis& a : spec.axes) axes.push_back({{"parameter", a.parameter}, {"values", a.values}});
  json rows = json::array();
  std::optional<std::size_t> best;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const SweepCell& c = cells[i];
    json row = {{"values", c.values}, {"status", c.ok ? "ok" : "failed"}};
    if (c.ok) {
      row["efficiency"] = c.report.efficiency.value;
      row["total_loss"] = c.report.total_loss;
      row["max_intermediate_ground_peak"] = c.report.max_intermediate_ground_peak;
      if (!best || c.report.efficiency.value > cells[*best].report.efficiency.value) best = i;
    } else {
      row["error"] = c.error;
      ++failed;
    }
    rows.push_back(std::move(row));
  }
  json j = {{"scenario", cfg.scenario.name}, {"axes", axes}, {"cells", rows.size()}, {"failed_cells", failed},
            {"results", rows}};
  if (best) {
    j["best"] = {{"index", *best},
                 {"values", cells[*best].values},
                 {"report", to_json(cells[*best].report, cfg.scenario.system)}};
  } else {
    j["best"] = nullptr;
  }
  return j;
}

json optimize_json(const RunConfig& cfg, const OptimizeSpec& spec, const OptimizeResult& r) {
  json params = json::array();
  for (std::size_t k = 0; k < spec.parameters.size(); ++k) {
    const FreeParameter& p = spec.parameters[k];
    params.push_back({{"name", p.name}, {"start", p.start}, {"lower", p.lower}, {"upper", p.upper},
                      {"best", k < r.best.size() ? json(r.best[k]) : json(nullptr)}});
  }
  return {{"scenario", cfg.scenario.name},
          {"parameters", params},
          {"best_objective", r.best_objective},
          {"efficiency", r.report.efficiency.value},
          {"incumbents", r.incumbents},
          {"evaluations", r.evaluations},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"budget_exhausted", r.budget_exhausted},
          {"rabi_cap", spec.rabi_cap ? json(*spec.rabi_cap) : json(nullptr)},
          {"report", to_json(r.report, cfg.scenario.system)}};
}

AnalyzeOutput analyze(const RunConfig& cfg) {
  const ChainSystem& system = cfg.scenario.system;
  const SimulationGrid& grid = cfg.scenario.grid;
  AnalyzeOutput out;

  std::optional<AdiabaticityMetrics> metrics;
  try {
    metrics = adiabaticity_metrics(system, grid.t_start, grid.t_end);
    out.adiabaticity = to_json(*metrics);
  } catch (const AnalysisError& e) {
    out.adiabaticity = {{"error", e.what()}};
  }
  out.adiabaticity["scenario"] = cfg.scenario.name;
  out.adiabaticity["window_s"] = {grid.t_start, grid.t_end};

  json samples = json::array();
  for (double t : analyze_times(cfg, metrics)) {
    const Eigen::VectorXd rabi = rabi_frequencies(system, t);
    const Eigen::MatrixXd h = build_hamiltonian(system, t);
    const std::vector<DarkState> dark = dark_states_numeric(h);
    const std::optional<double> theta = mixing_angle(rabi(0), rabi(rabi.size() - 1));
    json states = json::array();
    for (const DarkState& d : dark) {
      double excited = 0.0;
      for (Eigen::Index k = 1; k < d.amplitudes.size(); k += 2) excited = std::max(excited, std::abs(d.amplitudes(k)));
      const double norm = h.norm();
      states.push_back({{"amplitudes", vector_json(d.amplitudes)},
                        {"max_excited_amplitude", excited},
                        {"relative_residual", norm > 0 ? (h * d.amplitudes).norm() / norm : 0.0}});
    }
    json sample = {{"t_s", t},
                   {"rabi", vector_json(rabi)},
                   {"theta", theta ? json(*theta) : json(nullptr)},
                   {"dark_states", states}};
    if (system.size() == 5) {
      try {
        sample["analytic"] = vector_json(dark_state_analytic5(rabi(0), rabi(1), rabi(2), rabi(3)).amplitudes);
      } catch (const std::exception&) {
        sample["analytic"] = nullptr;
      }
    }
    samples.push_back(std::move(sample));
  }
  out.darkstate = {{"scenario", cfg.scenario.name}, {"samples", samples}};

  out.decay_prediction = {{"scenario", cfg.scenario.name}};
  try {
    const std::vector<double> times = grid.times();
    const double g1 = system.levels.at(0).loss_rate;
    const double g2 = system.levels.at(2).loss_rate;
    const DarkDecayExponent e = dark_decay_exponent(system, times, g1, g2);
    out.decay_prediction["applicable"] = true;
    out.decay_prediction["gamma1"] = g1;
    out.decay_prediction["gamma2"] = g2;
    out.decay_prediction["exponent_gamma1_part"] = e.gamma1_part;
    out.decay_prediction["exponent_gamma2_part"] = e.gamma2_part;
    out.decay_prediction["survival"] = std::exp(-e.total());
  } catch (const std::exception& e) {
    out.decay_prediction["applicable"] = false;
    out.decay_prediction["reason"] = e.what();
  }
  return out;
}

int cmd_simulate(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(inv);
    const SimulationResult result = simulate(cfg.scenario);
    std::vector<Artifact> artifacts;
    if (cfg.emit_timeseries) artifacts.emplace_back("timeseries.csv", timeseries_csv(cfg.scenario.system, result.trajectory));
    if (cfg.emit_report) artifacts.emplace_back("report.json", dump(simulate_report_json(cfg, result.report)));
    if (cfg.emit_svg) artifacts.emplace_back("populations.svg", populations_svg(cfg.scenario.system, result.trajectory));
    write_artifacts(cfg.output_dir, artifacts);
    out << cfg.scenario.name << ": efficiency " << result.report.efficiency.value << ", max intermediate ground "
        << result.report.max_intermediate_ground_peak << " -> " << cfg.output_dir.string() << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_sweep(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(inv);
    if (!cfg.sweep) throw ValidationError("config has no 'sweep' section");
    const std::vector<SweepCell> cells = sweep(cfg.scenario, *cfg.sweep);
    const bool any_ok = std::any_of(cells.begin(), cells.end(), [](const SweepCell& c) { return c.ok; });
    if (!any_ok) throw IntegrationError("every sweep cell failed: " + cells.front().error);
    const json summary = sweep_json(cfg, *cfg.sweep, cells);
    write_artifacts(cfg.output_dir, {{"sweep.csv", sweep_csv(*cfg.sweep, cells)}, {"sweep.json", dump(summary)}});
    out << cfg.scenario.name << ": " << cells.size() << " cells, " << summary["failed_cells"].get<std::size_t>()
        << " failed, best efficiency " << summary["best"]["report"]["efficiency"].get<double>() << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_optimize(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(inv);
    if (!cfg.optimize) throw ValidationError("config has no 'optimize' section");
    const OptimizeResult result = optimize(cfg.scenario, *cfg.optimize);
    write_artifacts(cfg.output_dir, {{"optimize.json", dump(optimize_json(cfg, *cfg.optimize, result))}});
    out << cfg.scenario.name << ": best objective " << result.best_objective << " after " << result.evaluations
        << " evaluations" << (result.converged ? " (converged)" : "") << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_analyze(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(inv);
    const AnalyzeOutput a = analyze(cfg);
    write_artifacts(cfg.output_dir, {{"darkstate.json", dump(a.darkstate)},
                                     {"adiabaticity.json", dump(a.adiabaticity)},
                                     {"decay_prediction.json", dump(a.decay_prediction)}});
    out << cfg.scenario.name << ": " << a.darkstate["samples"].size() << " dark-state samples -> "
        << cfg.output_dir.string() << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_presets_list(std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    for (const PresetInfo& p : preset_catalog()) out << p.name << "\t" << p.description << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_presets_export(const std::string& name, const std::optional<std::filesystem::path>& file, std::ostream& out,
                       std::ostream& err) {
  return guarded(err, [&] {
    const std::string text = dump(preset_to_config(preset_by_name(name)));
    if (file) {
      const std::filesystem::path dir = file->has_parent_path() ? file->parent_path() : ".";
      write_artifacts(dir, {{file->filename().string(), text}});
    } else {
      out << text;
    }
    return static_cast<int>(kOk);
  });
}

int cmd_config_validate(const Invocation& inv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve(inv);
    out << "ok: " << cfg.scenario.name << ", " << cfg.scenario.system.size() << " levels, window ["
        << cfg.scenario.grid.t_start << ", " << cfg.scenario.grid.t_end << "] s, " << cfg.scenario.grid.output_points
        << " points" << (cfg.sweep ? ", sweep" : "") << (cfg.optimize ? ", optimize" : "") << '\n';
    return static_cast<int>(kOk);
  });
}

}  // namespace cstirap::cli
