#include "cstirap/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace cstirap {

namespace {

Level ground(std::string label, double loss) { return {std::move(label), LevelKind::ground, loss, 0.0}; }
Level excited(std::string label, double loss) { return {std::move(label), LevelKind::excited, loss, 0.0}; }

Coupling link(std::size_t lower, double dipole, double wavelength, PulseEnvelope drive) {
  return {lower, dipole, wavelength, drive};
}

PulseEnvelope constant_drive(double rabi) { return {PulseShape::constant, rabi, 0.0, 0.0, 0.0}; }
PulseEnvelope tanh_on(double peak, double width, double delay) {
  return {PulseShape::tanh_on, peak, width, delay, 0.0};
}
PulseEnvelope tanh_off(double peak, double width, double delay) {
  return {PulseShape::tanh_off, peak, width, delay, 0.0};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void refresh_window(ScenarioPreset& preset) {
  if (!preset.auto_window) return;
  const auto [lo, hi] = default_window(preset.system);
  preset.grid.t_start = lo;
  preset.grid.t_end = hi;
}

ScenarioPreset preset_five_level(const FiveLevelParams& p) {
  if (!(p.xi > 0.0) || !(p.omega0 > 0.0) || !(p.width > 0.0))
    throw ValidationError("five-level preset needs xi > 0, omega0 > 0 and T > 0");
  ScenarioPreset preset;
  preset.name = "five-level";
  preset.description = "Five-level chain g1-e1-g2-e2-g3 with strong constant middle couplings";
  const double peak = p.xi * p.omega0 / std::sqrt(2.0);

  ChainSystem& s = preset.system;
  s.levels = {ground("g1", p.gamma1), excited("e1", p.gamma_excited), ground("g2", p.gamma2),
              excited("e2", p.gamma_excited), ground("g3", 0.0)};
  s.couplings = {
      link(0, 1.0, 0.0, tanh_on(peak, p.width, p.delay)),
      link(1, 1.0, 0.0, constant_drive(p.omega0)),
      link(2, 1.0, 0.0, constant_drive(p.omega0)),
      link(3, 1.0, 0.0, tanh_off(peak, p.width, p.delay)),
  };
  s.initial_level = 0;
  s.target_level = 4;
  s = validate_chain(std::move(s));

  preset.grid.output_points = 2001;
  refresh_window(preset);

  preset.provenance = {
      {"couplings.0.drive.peak", "xi * omega0 / sqrt(2) = " + fmt(peak) + " s^-1 (pump, tanh-on)"},
      {"couplings.3.drive.peak", "xi * omega0 / sqrt(2) = " + fmt(peak) + " s^-1 (Stokes, tanh-off)"},
      {"couplings.1.drive.peak", "omega0 = " + fmt(p.omega0) + " s^-1"},
      {"couplings.2.drive.peak", "omega0 = " + fmt(p.omega0) + " s^-1"},
      {"levels.0.loss_rate", "Feshbach-state collisional loss " + fmt(p.gamma1) + " s^-1"},
      {"levels.2.loss_rate", "k_inel * n_at = 6e-10 cm^3/s * 1e14 cm^-3 by default; " + fmt(p.gamma2) + " s^-1"},
      {"levels.1.loss_rate", "excited-state loss " + fmt(p.gamma_excited) + " s^-1"},
      {"levels.3.loss_rate", "excited-state loss " + fmt(p.gamma_excited) + " s^-1"},
      {"T", fmt(p.width) + " s"},
      {"tau", fmt(p.delay) + " s"},
      {"dipoles", "placeholder 1 D; the five-level model is specified by Rabi frequencies only"},
  };
  return preset;
}

ScenarioPreset preset_rb2_seven_level() {
  ScenarioPreset preset;
  preset.name = "rb2-seven";
  preset.description =
      "Seven-state 87Rb2 chain from the Feshbach state to X v=0: tanh pump/Stokes, four CW links";

  constexpr double width = 1e-6;
  constexpr double delay = -2e-6;
  constexpr double pulsed_peak = 3e7;
  const double dipoles[6] = {0.4, 0.8, 0.55, 0.64, 0.53, 2.37};
  const double wavelengths[6] = {780.7, 780.4, 846.0, 907.4, 990.0, 856.4};
  auto cw = [&](std::size_t i) { return 1.2 * dipoles[i] * 1e8; };

  ChainSystem& s = preset.system;
  s.levels = {
      ground("Feshbach", 1e4),   excited("0g- v=31", 8e7), ground("X v=116", 6e4), excited("A v'=152", 3e7),
      ground("X v=50", 6e4),     excited("A v'=21", 3e7),  ground("X v=0", 0.0),
  };
  s.couplings = {
      link(0, dipoles[0], wavelengths[0], tanh_on(pulsed_peak, width, delay)),
      link(1, dipoles[1], wavelengths[1], constant_drive(cw(1))),
      link(2, dipoles[2], wavelengths[2], constant_drive(cw(2))),
      link(3, dipoles[3], wavelengths[3], constant_drive(cw(3))),
      link(4, dipoles[4], wavelengths[4], constant_drive(cw(4))),
      link(5, dipoles[5], wavelengths[5], tanh_off(pulsed_peak, width, delay)),
  };
  s.initial_level = 0;
  s.target_level = 6;
  s = validate_chain(std::move(s));

  preset.grid.output_points = 1801;
  refresh_window(preset);

  const std::string chain = "published Rb2 transfer path, ";
  const std::string sim = "published seven-state simulation parameters, ";
  auto& pv = preset.provenance;
  pv["levels.0.label"] = chain + "initial Feshbach molecular state";
  pv["levels.1.label"] = chain + "0g- v=31 J=0";
  pv["levels.2.label"] = chain + "X1Sigma+g v=116 J=0";
  pv["levels.3.label"] = chain + "A1Sigma+u v'=152 J=1";
  pv["levels.4.label"] = chain + "X1Sigma+g v=50 J=0";
  pv["levels.5.label"] = chain + "A1Sigma+u v'=21 J=1";
  pv["levels.6.label"] = chain + "listed as X1Sigma+u(v=0,J=0); treated as the ground electronic state v=0";
  pv["levels.0.loss_rate"] = sim + "Gamma1 = 1e4 s^-1";
  pv["levels.1.loss_rate"] = sim + "gamma1 = 8e7 s^-1";
  pv["levels.2.loss_rate"] = sim + "Gamma2 = 6e4 s^-1 (k_inel 6e-10 cm^3/s at n_at 1e14 cm^-3)";
  pv["levels.3.loss_rate"] = sim + "gamma2 = 3e7 s^-1";
  pv["levels.4.loss_rate"] = sim + "Gamma3 = 6e4 s^-1";
  pv["levels.5.loss_rate"] = sim + "gamma3 = 3e7 s^-1";
  pv["levels.6.loss_rate"] = "target state v=0 is stable: 0 s^-1";
  for (std::size_t i = 0; i < 7; ++i)
    pv["levels." + std::to_string(i) + ".detuning"] = "one-photon detunings set to zero (Raman and one-photon resonance)";
  for (std::size_t i = 0; i < 6; ++i) {
    const std::string k = "couplings." + std::to_string(i);
    pv[k + ".dipole_moment"] = chain + "link " + std::to_string(i + 1) + " dipole " + fmt(dipoles[i]) + " D";
    pv[k + ".wavelength"] = chain + "link " + std::to_string(i + 1) + " wavelength " + fmt(wavelengths[i]) + " nm";
  }
  for (std::size_t i = 1; i < 5; ++i)
    pv["couplings." + std::to_string(i) + ".drive.peak"] =
        sim + "CW Omega_i = 1.2 * D_i * 1e8 s^-1 = " + fmt(cw(i)) + " s^-1";
  pv["couplings.0.drive.peak"] = sim + "Omega1_max = 3e7 s^-1 (tanh-on pump)";
  pv["couplings.5.drive.peak"] = sim + "Omega6_max = 3e7 s^-1 (tanh-off Stokes)";
  pv["couplings.0.drive.width"] = sim + "T = 1 us";
  pv["couplings.5.drive.width"] = sim + "T = 1 us";
  pv["couplings.0.drive.delay"] = sim + "tau = -2 us";
  pv["couplings.5.drive.delay"] = sim + "tau = -2 us";
  pv["initial_level"] = "all population starts in the Feshbach state";
  pv["target_level"] = "ground vibrational state v=0 (last chain level)";
  pv["grid.window"] = "not published; default window spans both switch points widened by 8 T";
  return preset;
}

std::vector<PresetInfo> preset_catalog() {
  return {
      {"five-level", preset_five_level().description},
      {"rb2-seven", preset_rb2_seven_level().description},
  };
}

ScenarioPreset preset_by_name(std::string_view name) {
  if (name == "five-level") return preset_five_level();
  if (name == "rb2-seven") return preset_rb2_seven_level();
  throw ValidationError("unknown preset '" + std::string(name) + "' (known: five-level, rb2-seven)");
}

namespace {

std::optional<std::size_t> peak_index(std::string_view name) {
  constexpr std::string_view prefix = "peak.";
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  const std::string_view digits = name.substr(prefix.size());
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return idx;
}

}  // namespace

bool is_parameter(std::string_view name) {
  return name == "T" || name == "tau" || name == "omega0" || name == "pump_peak" || name == "stokes_peak" ||
         peak_index(name).has_value();
}

void set_parameter(ScenarioPreset& preset, std::string_view name, double value) {
  if (!std::isfinite(value)) throw ValidationError("parameter " + std::string(name) + " must be finite");
  auto& couplings = preset.system.couplings;
  if (name == "T") {
    for (Coupling& c : couplings)
      if (c.drive.time_dependent()) c.drive.width = value;
  } else if (name == "tau") {
    for (Coupling& c : couplings)
      if (c.drive.shape == PulseShape::tanh_on || c.drive.shape == PulseShape::tanh_off) c.drive.delay = value;
  } else if (name == "omega0") {
    double largest = 0.0;
    for (const Coupling& c : couplings)
      if (!c.drive.time_dependent()) largest = std::max(largest, c.drive.peak_rabi);
    if (!(largest > 0.0)) throw ValidationError("omega0: preset has no nonzero constant coupling");
    for (Coupling& c : couplings)
      if (!c.drive.time_dependent()) c.drive.peak_rabi *= value / largest;
  } else if (name == "pump_peak") {
    couplings.front().drive.peak_rabi = value;
  } else if (name == "stokes_peak") {
    couplings.back().drive.peak_rabi = value;
  } else if (const auto idx = peak_index(name)) {
    if (*idx >= couplings.size()) throw ValidationError("parameter " + std::string(name) + ": no such coupling");
    couplings[*idx].drive.peak_rabi = value;
  } else {
    throw ValidationError("unknown pulse parameter '" + std::string(name) + "'");
  }
  preset.system = validate_chain(std::move(preset.system));
  refresh_window(preset);
}

double get_parameter(const ScenarioPreset& preset, std::string_view name) {
  const auto& couplings = preset.system.couplings;
  if (name == "T" || name == "tau") {
    for (const Coupling& c : couplings)
      if (c.drive.time_dependent() && (name == "T" || c.drive.shape != PulseShape::gaussian))
        return name == "T" ? c.drive.width : c.drive.delay;
    throw ValidationError("preset has no time-dependent envelope for " + std::string(name));
  }
  if (name == "omega0") {
    double largest = 0.0;
    for (const Coupling& c : couplings)
      if (!c.drive.time_dependent()) largest = std::max(largest, c.drive.peak_rabi);
    return largest;
  }
  if (name == "pump_peak") return couplings.front().drive.peak_rabi;
  if (name == "stokes_peak") return couplings.back().drive.peak_rabi;
  if (const auto idx = peak_index(name)) {
    if (*idx >= couplings.size()) throw ValidationError("parameter " + std::string(name) + ": no such coupling");
    return couplings[*idx].drive.peak_rabi;
  }
  throw ValidationError("unknown pulse parameter '" + std::string(name) + "'");
}

std::vector<LinkIntensity> intensity_report(const ScenarioPreset& preset) {
  std::vector<LinkIntensity> out;
  for (const Coupling& c : preset.system.couplings)
    out.push_back({c.lower_index, c.dipole_moment, c.wavelength, c.drive.peak_rabi,
                   intensity_from_rabi(c.dipole_moment, c.drive.peak_rabi), c.drive.time_dependent()});
  return out;
}

double max_omega_eff(const ScenarioPreset& preset, std::size_t samples) {
  const PulseEnvelope& pump = preset.system.couplings.front().drive;
  const PulseEnvelope& stokes = preset.system.couplings.back().drive;
  double best = 0.0;
  const double dt = (preset.grid.t_end - preset.grid.t_start) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = preset.grid.t_start + dt * static_cast<double>(i);
    best = std::max(best, std::hypot(envelope_eval(pump, t), envelope_eval(stokes, t)));
  }
  return best;
}

SimulationResult simulate(const ScenarioPreset& preset, const PropagationOptions& options) {
  const ChainSystem& s = preset.system;
  SimulationResult r;
  r.trajectory = propagate_density(s, preset.grid, basis_density(s.size(), s.initial_level), options);
  r.report = make_report(s, r.trajectory);
  return r;
}

}  // namespace cstirap
