#include "cstirap/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "cstirap/units.hpp"

namespace cstirap {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& context) {
  if (!j.is_object()) throw ValidationError(context + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ValidationError("unknown key '" + item.key() + "' in " + context);
  }
}

std::string with_unit(double value, std::string_view unit) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g %.*s", value, static_cast<int>(unit.size()), unit.data());
  return buf;
}

std::size_t index_from_json(const json& j, const std::string& what) {
  if (!j.is_number_integer() && !(j.is_number() && std::floor(j.get<double>()) == j.get<double>()))
    throw ValidationError(what + " must be an integer");
  const double v = j.get<double>();
  if (v < 0) throw ValidationError(what + " must be >= 0");
  return static_cast<std::size_t>(v);
}

PulseShape shape_from_string(const std::string& s) {
  if (s == "constant") return PulseShape::constant;
  if (s == "tanh_on") return PulseShape::tanh_on;
  if (s == "tanh_off") return PulseShape::tanh_off;
  if (s == "gaussian") return PulseShape::gaussian;
  throw ValidationError("unknown pulse shape '" + s + "' (constant, tanh_on, tanh_off, gaussian)");
}

std::string_view shape_name(PulseShape s) {
  switch (s) {
    case PulseShape::constant: return "constant";
    case PulseShape::tanh_on: return "tanh_on";
    case PulseShape::tanh_off: return "tanh_off";
    case PulseShape::gaussian: return "gaussian";
  }
  return "constant";
}

Dimension parameter_dimension(std::string_view name) {
  return (name == "T" || name == "tau") ? Dimension::time : Dimension::rate;
}

bool is_five_level_factory_key(std::string_view key) {
  return key == "xi" || key == "omega0" || key == "Gamma1" || key == "Gamma2" || key == "gamma";
}

FiveLevelParams five_level_params(const json& params, const std::vector<Override>& overrides) {
  FiveLevelParams p;
  auto apply = [&p](const std::string& key, const json& value) {
    if (key == "xi") p.xi = quantity_from_json(value, Dimension::dimensionless);
    else if (key == "omega0") p.omega0 = quantity_from_json(value, Dimension::rate);
    else if (key == "Gamma1") p.gamma1 = quantity_from_json(value, Dimension::rate);
    else if (key == "Gamma2") p.gamma2 = quantity_from_json(value, Dimension::rate);
    else if (key == "gamma") p.gamma_excited = quantity_from_json(value, Dimension::rate);
    else throw ValidationError("unknown five-level preset parameter '" + key + "'");
  };
  if (!params.is_null()) {
    if (!params.is_object()) throw ValidationError("preset_parameters must be an object");
    for (const auto& item : params.items()) apply(item.key(), item.value());
  }
  for (const auto& [key, value] : overrides)
    if (is_five_level_factory_key(key)) apply(key, value);
  return p;
}

void apply_grid_section(const json& g, SimulationGrid& grid, bool& auto_window) {
  check_keys(g, {"t_start", "t_end", "output_points", "rel_tol", "abs_tol"}, "grid");
  if (g.contains("t_start")) {
    grid.t_start = quantity_from_json(g["t_start"], Dimension::time);
    auto_window = false;
  }
  if (g.contains("t_end")) {
    grid.t_end = quantity_from_json(g["t_end"], Dimension::time);
    auto_window = false;
  }
  if (g.contains("output_points")) grid.output_points = index_from_json(g["output_points"], "grid.output_points");
  if (g.contains("rel_tol")) grid.rel_tol = quantity_from_json(g["rel_tol"], Dimension::dimensionless);
  if (g.contains("abs_tol")) grid.abs_tol = quantity_from_json(g["abs_tol"], Dimension::dimensionless);
}

json::json_pointer override_pointer(const std::string& key) {
  std::string path = key;
  if (path.rfind("system.", 0) == 0) path = path.substr(7);
  std::string root = "system";
  if (path.rfind("grid.", 0) == 0) {
    root = "grid";
    path = path.substr(5);
  }
  std::string pointer = "/" + root;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ValidationError("malformed override path '" + key + "'");
    pointer += "/" + part;
  }
  return json::json_pointer(pointer);
}

std::vector<Override> overrides_from_doc(const json& doc) {
  std::vector<Override> out;
  if (!doc.contains("set")) return out;
  const json& s = doc["set"];
  if (!s.is_object()) throw ValidationError("'set' must be an object of key: value overrides");
  for (const auto& item : s.items()) out.emplace_back(item.key(), item.value());
  return out;
}

}  // namespace

double quantity_from_json(const json& value, Dimension dimension) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return parse_quantity_as(value.get<std::string>(), dimension);
  if (value.is_object() && value.contains("value")) {
    check_keys(value, {"value", "unit"}, "quantity");
    const double v = value["value"].get<double>();
    if (!value.contains("unit")) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g ", v);
    return parse_quantity_as(buf + value["unit"].get<std::string>(), dimension);
  }
  throw ValidationError("expected a " + std::string(dimension_name(dimension)) + " quantity, got " + value.dump());
}

Override parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ValidationError("override '" + text + "' is not key=value");
  const std::string key = text.substr(0, eq);
  const std::string raw = text.substr(eq + 1);
  try {
    const Quantity q = parse_quantity(raw);
    if (q.dimension == Dimension::dimensionless) {
      if (raw.find_first_of(".eE") == std::string::npos && q.value == std::floor(q.value))
        return {key, json(static_cast<long long>(q.value))};
      return {key, json(q.value)};
    }
  } catch (const ValidationError&) {
  }
  return {key, json(raw)};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

json system_to_json(const ChainSystem& s) {
  json levels = json::array();
  for (const Level& l : s.levels)
    levels.push_back({{"label", l.label},
                      {"kind", l.kind == LevelKind::ground ? "ground" : "excited"},
                      {"loss_rate", with_unit(l.loss_rate, "/s")},
                      {"detuning", with_unit(l.detuning, "/s")}});
  json couplings = json::array();
  for (const Coupling& c : s.couplings) {
    json drive = {{"shape", shape_name(c.drive.shape)}, {"peak", with_unit(c.drive.peak_rabi, "/s")}};
    if (c.drive.time_dependent()) drive["width"] = with_unit(c.drive.width, "s");
    if (c.drive.shape == PulseShape::tanh_on || c.drive.shape == PulseShape::tanh_off)
      drive["delay"] = with_unit(c.drive.delay, "s");
    if (c.drive.shape == PulseShape::gaussian) drive["center"] = with_unit(c.drive.center, "s");
    couplings.push_back({{"lower", c.lower_index},
                         {"dipole", with_unit(c.dipole_moment, "D")},
                         {"wavelength", with_unit(c.wavelength, "nm")},
                         {"drive", drive}});
  }
  return {{"levels", levels},
          {"couplings", couplings},
          {"initial_level", s.initial_level},
          {"target_level", s.target_level}};
}

ChainSystem system_from_json(const json& j) {
  check_keys(j, {"levels", "couplings", "initial_level", "target_level"}, "system");
  if (!j.contains("levels") || !j["levels"].is_array()) throw ValidationError("system.levels must be an array");
  if (!j.contains("couplings") || !j["couplings"].is_array())
    throw ValidationError("system.couplings must be an array");

  ChainSystem s;
  std::size_t i = 0;
  for (const json& lj : j["levels"]) {
    const std::string ctx = "system.levels[" + std::to_string(i) + "]";
    check_keys(lj, {"label", "kind", "loss_rate", "detuning"}, ctx);
    Level l;
    l.label = lj.value("label", "level" + std::to_string(i));
    const std::string kind = lj.value("kind", i % 2 == 0 ? "ground" : "excited");
    if (kind == "ground") l.kind = LevelKind::ground;
    else if (kind == "excited") l.kind = LevelKind::excited;
    else throw ValidationError(ctx + ".kind must be 'ground' or 'excited'");
    if (lj.contains("loss_rate")) l.loss_rate = quantity_from_json(lj["loss_rate"], Dimension::rate);
    if (lj.contains("detuning")) l.detuning = quantity_from_json(lj["detuning"], Dimension::rate);
    s.levels.push_back(std::move(l));
    ++i;
  }
  i = 0;
  for (const json& cj : j["couplings"]) {
    const std::string ctx = "system.couplings[" + std::to_string(i) + "]";
    check_keys(cj, {"lower", "dipole", "wavelength", "drive"}, ctx);
    Coupling c;
    c.lower_index = cj.contains("lower") ? index_from_json(cj["lower"], ctx + ".lower") : i;
    if (cj.contains("dipole")) c.dipole_moment = quantity_from_json(cj["dipole"], Dimension::dipole);
    if (cj.contains("wavelength")) c.wavelength = quantity_from_json(cj["wavelength"], Dimension::length);
    if (!cj.contains("drive")) throw ValidationError(ctx + " needs a drive");
    const json& dj = cj["drive"];
    check_keys(dj, {"shape", "peak", "width", "delay", "center"}, ctx + ".drive");
    c.drive.shape = shape_from_string(dj.value("shape", "constant"));
    if (dj.contains("peak")) {
      const json& pk = dj["peak"];
      Quantity q{0.0, Dimension::rate};
      if (pk.is_string()) q = parse_quantity(pk.get<std::string>());
      if (q.dimension == Dimension::intensity) {
        c.drive.peak_rabi = rabi_from_intensity(c.dipole_moment, q.value);
      } else {
        c.drive.peak_rabi = quantity_from_json(pk, Dimension::rate);
      }
    }
    if (dj.contains("width")) c.drive.width = quantity_from_json(dj["width"], Dimension::time);
    if (dj.contains("delay")) c.drive.delay = quantity_from_json(dj["delay"], Dimension::time);
    if (dj.contains("center")) c.drive.center = quantity_from_json(dj["center"], Dimension::time);
    s.couplings.push_back(c);
    ++i;
  }
  s.initial_level = j.contains("initial_level") ? index_from_json(j["initial_level"], "system.initial_level") : 0;
  s.target_level = j.contains("target_level") ? index_from_json(j["target_level"], "system.target_level")
                                               : (s.levels.empty() ? 0 : s.levels.size() - 1);
  return validate_chain(std::move(s));
}

json grid_to_json(const SimulationGrid& g) {
  return {{"t_start", with_unit(g.t_start, "s")},
          {"t_end", with_unit(g.t_end, "s")},
          {"output_points", g.output_points},
          {"rel_tol", g.rel_tol},
          {"abs_tol", g.abs_tol}};
}

json preset_to_config(const ScenarioPreset& preset) {
  return {{"system", system_to_json(preset.system)}, {"grid", grid_to_json(preset.grid)}};
}

SweepSpec sweep_from_json(const json& j) {
  check_keys(j, {"axes", "workers"}, "sweep");
  SweepSpec spec;
  if (!j.contains("axes") || !j["axes"].is_array()) throw ValidationError("sweep.axes must be an array");
  for (const json& a : j["axes"]) {
    check_keys(a, {"parameter", "values"}, "sweep axis");
    SweepAxis axis;
    axis.parameter = a.at("parameter").get<std::string>();
    if (!a.contains("values") || !a["values"].is_array()) throw ValidationError("sweep axis needs a values array");
    for (const json& v : a["values"]) axis.values.push_back(quantity_from_json(v, parameter_dimension(axis.parameter)));
    spec.axes.push_back(std::move(axis));
  }
  if (j.contains("workers")) spec.workers = static_cast<unsigned>(index_from_json(j["workers"], "sweep.workers"));
  validate_sweep(spec);
  return spec;
}

OptimizeSpec optimize_from_json(const json& j) {
  check_keys(j, {"parameters", "tolerance", "max_evaluations", "rabi_cap", "workers"}, "optimize");
  OptimizeSpec spec;
  if (!j.contains("parameters") || !j["parameters"].is_array())
    throw ValidationError("optimize.parameters must be an array");
  for (const json& p : j["parameters"]) {
    check_keys(p, {"name", "start", "lower", "upper", "step"}, "optimize parameter");
    FreeParameter fp;
    fp.name = p.at("name").get<std::string>();
    const Dimension d = parameter_dimension(fp.name);
    fp.start = quantity_from_json(p.at("start"), d);
    fp.lower = quantity_from_json(p.at("lower"), d);
    fp.upper = quantity_from_json(p.at("upper"), d);
    if (p.contains("step")) fp.initial_step = quantity_from_json(p["step"], d);
    spec.parameters.push_back(fp);
  }
  if (j.contains("tolerance")) spec.tolerance = quantity_from_json(j["tolerance"], Dimension::dimensionless);
  if (j.contains("max_evaluations"))
    spec.max_evaluations = index_from_json(j["max_evaluations"], "optimize.max_evaluations");
  if (j.contains("rabi_cap")) spec.rabi_cap = quantity_from_json(j["rabi_cap"], Dimension::rate);
  if (j.contains("workers")) spec.workers = static_cast<unsigned>(index_from_json(j["workers"], "optimize.workers"));
  validate_optimize(spec);
  return spec;
}

RunConfig load_run_config(const json& doc, const std::vector<Override>& extra) {
  check_keys(doc, {"preset", "preset_parameters", "system", "set", "grid", "output", "sweep", "optimize", "analyze"},
             "config");
  const bool has_preset = doc.contains("preset");
  const bool has_system = doc.contains("system");
  if (has_preset == has_system) throw ValidationError("config needs exactly one of 'preset' or 'system'");

  std::vector<Override> overrides = overrides_from_doc(doc);
  overrides.insert(overrides.end(), extra.begin(), extra.end());

  RunConfig cfg;
  ScenarioPreset& sc = cfg.scenario;
  bool five_level = false;
  if (has_preset) {
    const std::string name = doc["preset"].get<std::string>();
    five_level = name == "five-level";
    if (five_level) {
      sc = preset_five_level(five_level_params(doc.value("preset_parameters", json()), overrides));
    } else {
      if (doc.contains("preset_parameters")) throw ValidationError("preset_parameters apply to five-level only");
      sc = preset_by_name(name);
    }
  } else {
    if (doc.contains("preset_parameters")) throw ValidationError("preset_parameters need a preset");
    sc.name = "custom";
    sc.description = "inline system";
    sc.system = system_from_json(doc["system"]);
    refresh_window(sc);
  }

  if (doc.contains("grid")) apply_grid_section(doc["grid"], sc.grid, sc.auto_window);

  // Dotted-path overrides edit the exported document and are parsed back.
  json exported = preset_to_config(sc);
  bool touched = false;
  std::vector<Override> parameters;
  for (const auto& [key, value] : overrides) {
    if (five_level && is_five_level_factory_key(key)) continue;
    if (is_parameter(key)) {
      parameters.emplace_back(key, value);
      continue;
    }
    if (key.find('.') == std::string::npos)
      throw ValidationError("unknown override '" + key + "'");
    const json::json_pointer ptr = override_pointer(key);
    if (!exported.contains(ptr.parent_pointer())) throw ValidationError("override path '" + key + "' does not exist");
    exported[ptr] = value;
    touched = true;
    if (key == "grid.t_start" || key == "grid.t_end") sc.auto_window = false;
  }
  if (touched) {
    sc.system = system_from_json(exported["system"]);
    bool ignored = true;
    apply_grid_section(exported["grid"], sc.grid, ignored);
  }
  for (const auto& [key, value] : parameters)
    set_parameter(sc, key, quantity_from_json(value, parameter_dimension(key)));
  refresh_window(sc);
  validate_grid(sc.grid);

  if (doc.contains("output")) {
    const json& o = doc["output"];
    check_keys(o, {"dir", "timeseries", "report", "svg"}, "output");
    if (o.contains("dir")) cfg.output_dir = o["dir"].get<std::string>();
    cfg.emit_timeseries = o.value("timeseries", true);
    cfg.emit_report = o.value("report", true);
    cfg.emit_svg = o.value("svg", false);
  }
  if (doc.contains("sweep")) cfg.sweep = sweep_from_json(doc["sweep"]);
  if (doc.contains("optimize")) cfg.optimize = optimize_from_json(doc["optimize"]);
  if (doc.contains("analyze")) {
    const json& a = doc["analyze"];
    check_keys(a, {"times"}, "analyze");
    if (a.contains("times"))
      for (const json& t : a["times"]) cfg.analyze_times.push_back(quantity_from_json(t, Dimension::time));
  }
  return cfg;
}

}  // namespace cstirap
