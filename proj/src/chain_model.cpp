#include "cstirap/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cstirap {

namespace {

std::string level_name(std::size_t i) { return "level " + std::to_string(i); }

}  // namespace

std::vector<double> SimulationGrid::times() const {
  validate_grid(*this);
  std::vector<double> out(output_points);
  const double span = t_end - t_start;
  const auto last = static_cast<double>(output_points - 1);
  for (std::size_t i = 0; i < output_points; ++i)
    out[i] = t_start + span * (static_cast<double>(i) / last);
  out.back() = t_end;
  return out;
}

void validate_envelope(const PulseEnvelope& pulse) {
  if (!std::isfinite(pulse.peak_rabi) || pulse.peak_rabi < 0.0)
    throw ValidationError("pulse peak Rabi frequency must be finite and >= 0");
  if (!std::isfinite(pulse.delay) || !std::isfinite(pulse.center))
    throw ValidationError("pulse delay and center must be finite");
  if (pulse.time_dependent() && !(pulse.width > 0.0 && std::isfinite(pulse.width)))
    throw ValidationError("time-dependent pulse needs width T > 0");
}

void validate_grid(const SimulationGrid& grid) {
  if (!std::isfinite(grid.t_start) || !std::isfinite(grid.t_end) || !(grid.t_end > grid.t_start))
    throw ValidationError("simulation grid needs finite t_end > t_start");
  if (grid.output_points < 2) throw ValidationError("simulation grid needs at least 2 output points");
  if (!(grid.rel_tol > 0.0) || !(grid.abs_tol > 0.0))
    throw ValidationError("integrator tolerances must be > 0");
}

ChainSystem validate_chain(ChainSystem system) {
  const std::size_t n = system.levels.size();
  if (n < 3) throw ValidationError("chain needs at least 3 levels, got " + std::to_string(n));
  if (n % 2 == 0)
    throw ValidationError("chain level count must be odd, got " + std::to_string(n));

  for (std::size_t i = 0; i < n; ++i) {
    const Level& level = system.levels[i];
    const LevelKind expected = (i % 2 == 0) ? LevelKind::ground : LevelKind::excited;
    if (level.kind != expected)
      throw ValidationError(level_name(i) + " breaks ground/excited alternation");
    if (!std::isfinite(level.loss_rate) || level.loss_rate < 0.0)
      throw ValidationError(level_name(i) + " has a negative or non-finite loss rate");
    if (!std::isfinite(level.detuning))
      throw ValidationError(level_name(i) + " has a non-finite detuning");
    if (level.kind == LevelKind::ground && level.detuning != 0.0)
      throw ValidationError(level_name(i) + " is a ground level with nonzero detuning (Raman resonance)");
  }

  if (system.couplings.size() != n - 1)
    throw ValidationError("chain of " + std::to_string(n) + " levels needs " + std::to_string(n - 1) +
                          " couplings, got " + std::to_string(system.couplings.size()));
  std::stable_sort(system.couplings.begin(), system.couplings.end(),
                   [](const Coupling& a, const Coupling& b) { return a.lower_index < b.lower_index; });
  for (std::size_t i = 0; i < system.couplings.size(); ++i) {
    const Coupling& c = system.couplings[i];
    if (c.lower_index != i)
      throw ValidationError("coupling for adjacent pair (" + std::to_string(i) + "," + std::to_string(i + 1) +
                            ") is missing or duplicated");
    if (!(c.dipole_moment > 0.0) || !std::isfinite(c.dipole_moment))
      throw ValidationError("coupling " + std::to_string(i) + " needs a positive dipole moment");
    validate_envelope(c.drive);
  }

  if (system.initial_level >= n || system.levels[system.initial_level].kind != LevelKind::ground)
    throw ValidationError("initial level must be a ground level of the chain");
  if (system.target_level >= n || system.levels[system.target_level].kind != LevelKind::ground)
    throw ValidationError("target level must be a ground level of the chain");
  return system;
}

double envelope_eval(const PulseEnvelope& p, double t) {
  switch (p.shape) {
    case PulseShape::constant:
      return p.peak_rabi;
    case PulseShape::tanh_on:
      return p.peak_rabi * 0.5 * (1.0 + std::tanh((t - 0.5 * p.delay) / p.width));
    case PulseShape::tanh_off:
      return p.peak_rabi * 0.5 * (1.0 - std::tanh((t + 0.5 * p.delay) / p.width));
    case PulseShape::gaussian: {
      const double x = (t - p.center) / p.width;
      return p.peak_rabi * std::exp(-x * x);
    }
  }
  return 0.0;
}

double envelope_derivative(const PulseEnvelope& p, double t) {
  switch (p.shape) {
    case PulseShape::constant:
      return 0.0;
    case PulseShape::tanh_on: {
      const double c = std::cosh((t - 0.5 * p.delay) / p.width);
      return std::isfinite(c) ? p.peak_rabi * 0.5 / (p.width * c * c) : 0.0;
    }
    case PulseShape::tanh_off: {
      const double c = std::cosh((t + 0.5 * p.delay) / p.width);
      return std::isfinite(c) ? -p.peak_rabi * 0.5 / (p.width * c * c) : 0.0;
    }
    case PulseShape::gaussian: {
      const double x = (t - p.center) / p.width;
      return -2.0 * x / p.width * p.peak_rabi * std::exp(-x * x);
    }
  }
  return 0.0;
}

std::pair<double, double> default_window(const ChainSystem& system, double widths) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double width = 0.0;
  for (const Coupling& c : system.couplings) {
    const PulseEnvelope& p = c.drive;
    double switch_time = 0.0;
    switch (p.shape) {
      case PulseShape::constant:
        continue;
      case PulseShape::tanh_on:
        switch_time = 0.5 * p.delay;
        break;
      case PulseShape::tanh_off:
        switch_time = -0.5 * p.delay;
        break;
      case PulseShape::gaussian:
        switch_time = p.center;
        break;
    }
    lo = std::min(lo, switch_time);
    hi = std::max(hi, switch_time);
    width = std::max(width, p.width);
  }
  if (!std::isfinite(lo)) return {0.0, 1.0};
  return {lo - widths * width, hi + widths * width};
}

double rabi_from_intensity(double dipole_debye, double intensity) {
  if (!(dipole_debye > 0.0)) throw ValidationError("dipole moment must be > 0");
  if (intensity < 0.0) throw ValidationError("intensity must be >= 0");
  const double intensity_si = intensity * 1e4;  // W/m^2
  const double field = std::sqrt(2.0 * intensity_si / (kVacuumPermittivity * kSpeedOfLight));
  return dipole_debye * kDebye * field / (2.0 * kHbar);
}

double intensity_from_rabi(double dipole_debye, double rabi) {
  if (!(dipole_debye > 0.0)) throw ValidationError("dipole moment must be > 0");
  const double field = 2.0 * kHbar * std::abs(rabi) / (dipole_debye * kDebye);
  return 0.5 * kVacuumPermittivity * kSpeedOfLight * field * field * 1e-4;
}

double collision_decay_rate(double k_inel, double density) {
  if (k_inel < 0.0 || density < 0.0) throw ValidationError("collision coefficient and density must be >= 0");
  return k_inel * density;
}

}  // namespace cstirap
