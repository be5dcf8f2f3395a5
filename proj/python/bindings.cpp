#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cstirap/config.hpp"
#include "cstirap/hamiltonian.hpp"
#include "cstirap/optimize.hpp"
#include "cstirap/scenarios.hpp"

namespace py = pybind11;
using namespace cstirap;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_python(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict trajectory_dict(const Trajectory& t) {
  py::dict d;
  d["times"] = Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(t.times.data(), static_cast<Eigen::Index>(t.times.size())));
  d["populations"] = t.populations;
  d["trace"] = Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(t.trace.data(), static_cast<Eigen::Index>(t.trace.size())));
  d["min_eigenvalue"] = t.min_eigenvalue;
  return d;
}

ScenarioPreset load(const py::object& config, const std::vector<std::string>& overrides) {
  std::vector<Override> parsed;
  for (const std::string& s : overrides) parsed.push_back(parse_override(s));
  return load_run_config(from_python(config), parsed).scenario;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chainwise STIRAP simulation core";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);
  py::register_exception<AnalysisError>(m, "AnalysisError", PyExc_RuntimeError);
  py::register_exception<FrameBreakdownError>(m, "FrameBreakdownError", PyExc_RuntimeError);

  py::class_<ScenarioPreset>(m, "Scenario")
      .def_readonly("name", &ScenarioPreset::name)
      .def_readonly("description", &ScenarioPreset::description)
      .def_property_readonly("levels", [](const ScenarioPreset& p) { return p.system.size(); })
      .def_property_readonly("labels",
                             [](const ScenarioPreset& p) {
                               std::vector<std::string> out;
                               for (const Level& l : p.system.levels) out.push_back(l.label);
                               return out;
                             })
      .def_property_readonly("window", [](const ScenarioPreset& p) { return std::make_pair(p.grid.t_start, p.grid.t_end); })
      .def_readonly("provenance", &ScenarioPreset::provenance)
      .def("set", [](ScenarioPreset& p, const std::string& name, double value) { set_parameter(p, name, value); })
      .def("get", [](const ScenarioPreset& p, const std::string& name) { return get_parameter(p, name); })
      .def("hamiltonian", [](const ScenarioPreset& p, double t) { return build_hamiltonian(p.system, t); })
      .def("to_config", [](const ScenarioPreset& p) { return to_python(preset_to_config(p)); });

  m.def("presets", [] {
    std::vector<std::string> names;
    for (const PresetInfo& p : preset_catalog()) names.push_back(p.name);
    return names;
  });
  m.def("preset", [](const std::string& name) { return preset_by_name(name); }, py::arg("name"));
  m.def(
      "five_level",
      [](double xi, double omega0, double gamma1, double gamma2, double gamma, double width, double delay) {
        return preset_five_level({xi, omega0, gamma1, gamma2, gamma, width, delay});
      },
      py::arg("xi") = 0.1, py::arg("omega0") = 1e8, py::arg("gamma1") = 1e4, py::arg("gamma2") = 6e4,
      py::arg("gamma") = 0.0, py::arg("width") = 1e-6, py::arg("delay") = -2e-6);
  m.def("load_config", &load, py::arg("config"), py::arg("overrides") = std::vector<std::string>{},
        "Scenario from a config document (dict) plus key=value overrides.");

  m.def(
      "simulate",
      [](const ScenarioPreset& p) {
        SimulationResult r;
        {
          py::gil_scoped_release release;
          r = simulate(p);
        }
        py::dict d = trajectory_dict(r.trajectory);
        d["report"] = to_python(to_json(r.report, p.system));
        return d;
      },
      py::arg("scenario"));
  m.def(
      "propagate_state",
      [](const ScenarioPreset& p) {
        return trajectory_dict(propagate_state(p.system, p.grid, basis_state(p.system.size(), p.system.initial_level)));
      },
      py::arg("scenario"));

  m.def("chain_hamiltonian", &chain_hamiltonian, py::arg("rabi"), py::arg("detuning"));
  m.def(
      "dark_state_analytic5",
      [](double w1, double w2, double w3, double w4) { return dark_state_analytic5(w1, w2, w3, w4).amplitudes; });
  m.def("dark_states", [](const Eigen::MatrixXd& h) {
    std::vector<Eigen::VectorXd> out;
    for (const DarkState& d : dark_states_numeric(h)) out.push_back(d.amplitudes);
    return out;
  });
  m.def(
      "adiabatic_frame",
      [](const ScenarioPreset& p, double t) {
        const AdiabaticFrame f = adiabatic_frame(p.system, t);
        py::dict d;
        d["eigenvalues"] = f.eigenvalues;
        d["w"] = f.w;
        d["theta"] = f.theta ? py::object(py::float_(*f.theta)) : py::object(py::none());
        d["omega_eff"] = f.omega_eff;
        d["xi"] = f.xi;
        d["dark_index"] = f.dark_index;
        return d;
      },
      py::arg("scenario"), py::arg("t"));
  m.def("dark_decay_rate", &dark_decay_rate, py::arg("theta"), py::arg("omega_eff"), py::arg("omega0"),
        py::arg("gamma1"), py::arg("gamma2"));
  m.def(
      "dark_survival_prediction",
      [](const ScenarioPreset& p) {
        const std::vector<double> t = p.grid.times();
        return dark_survival_prediction(p.system, t);
      },
      py::arg("scenario"));
  m.def(
      "adiabaticity",
      [](const ScenarioPreset& p) { return to_python(to_json(adiabaticity_metrics(p.system, p.grid.t_start, p.grid.t_end))); },
      py::arg("scenario"));
  m.def(
      "intensity_report",
      [](const ScenarioPreset& p) {
        py::list out;
        for (const LinkIntensity& l : intensity_report(p)) {
          py::dict d;
          d["link"] = l.link;
          d["dipole_debye"] = l.dipole;
          d["wavelength_nm"] = l.wavelength;
          d["peak_rabi"] = l.peak_rabi;
          d["intensity_w_cm2"] = l.intensity;
          d["pulsed"] = l.pulsed;
          out.append(d);
        }
        return out;
      },
      py::arg("scenario"));
  m.def("rabi_from_intensity", &rabi_from_intensity, py::arg("dipole_debye"), py::arg("intensity_w_cm2"));
  m.def("intensity_from_rabi", &intensity_from_rabi, py::arg("dipole_debye"), py::arg("rabi"));

  m.def(
      "sweep",
      [](const ScenarioPreset& p, const std::vector<std::pair<std::string, std::vector<double>>>& axes, unsigned workers) {
        SweepSpec spec;
        for (const auto& [name, values] : axes) spec.axes.push_back({name, values});
        spec.workers = workers;
        std::vector<SweepCell> cells;
        {
          py::gil_scoped_release release;
          cells = sweep(p, spec);
        }
        py::list out;
        for (const SweepCell& c : cells) {
          py::dict d;
          d["values"] = c.values;
          d["ok"] = c.ok;
          if (c.ok) d["efficiency"] = c.report.efficiency.value;
          else d["error"] = c.error;
          out.append(d);
        }
        return out;
      },
      py::arg("scenario"), py::arg("axes"), py::arg("workers") = 0);
  m.def(
      "optimize",
      [](const ScenarioPreset& p, const std::vector<std::tuple<std::string, double, double, double>>& parameters,
         std::size_t max_evaluations, double tolerance, std::optional<double> rabi_cap) {
        OptimizeSpec spec;
        for (const auto& [name, start, lower, upper] : parameters) spec.parameters.push_back({name, start, lower, upper});
        spec.max_evaluations = max_evaluations;
        spec.tolerance = tolerance;
        spec.rabi_cap = rabi_cap;
        OptimizeResult r;
        {
          py::gil_scoped_release release;
          r = optimize(p, spec);
        }
        py::dict d;
        d["best"] = r.best;
        d["best_objective"] = r.best_objective;
        d["incumbents"] = r.incumbents;
        d["evaluations"] = r.evaluations;
        d["converged"] = r.converged;
        d["budget_exhausted"] = r.budget_exhausted;
        return d;
      },
      py::arg("scenario"), py::arg("parameters"), py::arg("max_evaluations") = 500, py::arg("tolerance") = 1e-4,
      py::arg("rabi_cap") = py::none());
}
