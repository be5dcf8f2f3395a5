#include "cstirap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cstirap/hamiltonian.hpp"

namespace cstirap {

EfficiencyResult transfer_efficiency(const Trajectory& traj, std::size_t target) {
  if (traj.size() == 0 || target >= traj.levels()) throw AnalysisError("trajectory has no data for the target level");
  const auto col = static_cast<Eigen::Index>(target);
  EfficiencyResult r;
  r.value = traj.populations(static_cast<Eigen::Index>(traj.size() - 1), col);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double dt = traj.times[i] - traj.times[i - 1];
    const double rate = std::abs(traj.populations(static_cast<Eigen::Index>(i), col) -
                                 traj.populations(static_cast<Eigen::Index>(i - 1), col)) / dt;
    r.max_rate = std::max(r.max_rate, rate);
    if (i + 1 == traj.size()) r.final_rate = rate;
  }
  r.saturated = r.final_rate <= 1e-6 * r.max_rate || r.max_rate == 0.0;
  return r;
}

std::vector<PopulationPeak> peak_populations(const Trajectory& traj, std::span<const std::size_t> levels) {
  std::vector<PopulationPeak> out;
  out.reserve(levels.size());
  for (const std::size_t level : levels) {
    if (level >= traj.levels()) throw AnalysisError("peak_populations: level out of range");
    const auto col = traj.populations.col(static_cast<Eigen::Index>(level));
    Eigen::Index k = 0;
    const double p0 = col.maxCoeff(&k);
    PopulationPeak peak{level, traj.times[static_cast<std::size_t>(k)], p0};
    if (k > 0 && k + 1 < col.size()) {
      const double pm = col[k - 1];
      const double pp = col[k + 1];
      const double curvature = pm - 2.0 * p0 + pp;
      const double h = traj.times[static_cast<std::size_t>(k) + 1] - traj.times[static_cast<std::size_t>(k)];
      if (curvature < 0.0) {
        const double offset = 0.5 * (pm - pp) / curvature;
        peak.t_peak += offset * h;
        peak.p_peak = p0 - 0.125 * (pm - pp) * (pm - pp) / curvature;
      }
    }
    out.push_back(peak);
  }
  return out;
}

double dark_decay_rate(double theta, double omega_eff, double omega0, double gamma1, double gamma2) {
  if (!(omega0 > 0.0)) throw AnalysisError("dark_decay_rate needs Omega0 > 0");
  const double c2 = std::cos(theta) * std::cos(theta);
  const double mix = omega_eff / (2.0 * omega0) * std::sin(2.0 * theta);
  return (gamma2 + gamma1 * c2) * mix * mix + gamma1 * c2;
}

std::vector<double> mixing_angles(const ChainSystem& system, std::span<const double> times) {
  std::vector<std::optional<double>> raw(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    raw[i] = mixing_angle(envelope_eval(system.couplings.front().drive, times[i]),
                          envelope_eval(system.couplings.back().drive, times[i]));
  std::vector<double> out(times.size(), 0.0);
  std::optional<double> held;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i]) held = raw[i];
    if (held) out[i] = *held;
  }
  // Leading undefined points take the first defined angle.
  const auto first = std::find_if(raw.begin(), raw.end(), [](const auto& v) { return v.has_value(); });
  if (first != raw.end())
    for (auto it = raw.begin(); it != first; ++it) out[static_cast<std::size_t>(it - raw.begin())] = **first;
  return out;
}

namespace {

double five_level_omega0(const ChainSystem& system) {
  if (system.size() != 5) throw AnalysisError("dark-state decay law applies to five-level chains");
  const PulseEnvelope& a = system.couplings[1].drive;
  const PulseEnvelope& b = system.couplings[2].drive;
  if (a.time_dependent() || b.time_dependent() || a.peak_rabi != b.peak_rabi || !(a.peak_rabi > 0.0))
    throw AnalysisError("dark-state decay law needs equal constant middle couplings");
  return a.peak_rabi;
}

}  // namespace

DarkDecayExponent dark_decay_exponent(const ChainSystem& system, std::span<const double> times, double gamma1,
                                      double gamma2) {
  const double omega0 = five_level_omega0(system);
  const std::vector<double> theta = mixing_angles(system, times);
  DarkDecayExponent e;
  double prev1 = 0.0;
  double prev2 = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double omega = std::hypot(envelope_eval(system.couplings.front().drive, times[i]),
                                    envelope_eval(system.couplings.back().drive, times[i]));
    const double r1 = dark_decay_rate(theta[i], omega, omega0, gamma1, 0.0);
    const double r2 = dark_decay_rate(theta[i], omega, omega0, 0.0, gamma2);
    if (i > 0) {
      const double dt = times[i] - times[i - 1];
      e.gamma1_part += 0.5 * dt * (prev1 + r1);
      e.gamma2_part += 0.5 * dt * (prev2 + r2);
    }
    prev1 = r1;
    prev2 = r2;
  }
  return e;
}

double dark_survival_prediction(const ChainSystem& system, std::span<const double> times, double gamma1,
                                double gamma2) {
  return std::exp(-dark_decay_exponent(system, times, gamma1, gamma2).total());
}

double dark_survival_prediction(const ChainSystem& system, std::span<const double> times) {
  if (system.size() != 5) throw AnalysisError("dark-state decay law applies to five-level chains");
  return dark_survival_prediction(system, times, system.levels[0].loss_rate, system.levels[2].loss_rate);
}

AdiabaticityMetrics adiabaticity_metrics(const ChainSystem& system, double t_start, double t_end,
                                         std::size_t samples) {
  if (samples < 3 || !(t_end > t_start)) throw AnalysisError("adiabaticity_metrics needs a non-empty time range");
  const PulseEnvelope& pump = system.couplings.front().drive;
  const PulseEnvelope& stokes = system.couplings.back().drive;
  const double pump_floor = 0.01 * pump.peak_rabi;
  const double stokes_floor = 0.01 * stokes.peak_rabi;

  auto inside = [&](double t) {
    return envelope_eval(pump, t) > pump_floor && envelope_eval(stokes, t) > stokes_floor;
  };
  // Signed distance above both floors, linear between samples.
  auto margin = [&](double t) {
    return std::min(envelope_eval(pump, t) / pump.peak_rabi, envelope_eval(stokes, t) / stokes.peak_rabi) - 0.01;
  };

  AdiabaticityMetrics m;
  bool found = false;
  double min_omega = std::numeric_limits<double>::infinity();
  double prev_t = t_start;
  bool prev_in = false;
  const double dt = (t_end - t_start) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = i + 1 == samples ? t_end : t_start + dt * static_cast<double>(i);
    const bool in = pump.peak_rabi > 0.0 && stokes.peak_rabi > 0.0 && inside(t);
    if (in) {
      const double p = envelope_eval(pump, t);
      const double s = envelope_eval(stokes, t);
      const double omega2 = p * p + s * s;
      const double omega = std::sqrt(omega2);
      const double theta_dot =
          (envelope_derivative(pump, t) * s - p * envelope_derivative(stokes, t)) / omega2;
      m.max_theta_dot_over_omega = std::max(m.max_theta_dot_over_omega, std::abs(theta_dot) / omega);
      min_omega = std::min(min_omega, omega);
      if (!found) {
        found = true;
        m.overlap_start = t;
        if (i > 0) {
          const double a = margin(prev_t);
          const double b = margin(t);
          m.overlap_start = prev_t + (t - prev_t) * a / (a - b);
        }
      }
      m.overlap_end = t;
    } else if (prev_in) {
      const double a = margin(prev_t);
      const double b = margin(t);
      m.overlap_end = prev_t + (t - prev_t) * a / (a - b);
    }
    prev_in = in;
    prev_t = t;
  }
  if (!found) throw AnalysisError("pump and Stokes pulses never overlap above 1% of their peaks");
  m.transfer_time = m.overlap_end - m.overlap_start;
  m.omega_eff_t_tr = min_omega * m.transfer_time;
  m.adiabatic = m.max_theta_dot_over_omega <= 0.1;
  return m;
}

std::vector<std::size_t> intermediate_ground_levels(const ChainSystem& system) {
  std::vector<std::size_t> out;
  for (std::size_t i = 2; i + 1 < system.size(); i += 2) out.push_back(i);
  return out;
}

TransferReport make_report(const ChainSystem& system, const Trajectory& traj) {
  TransferReport r;
  r.target_level = system.target_level;
  r.target_label = system.levels[system.target_level].label;
  r.efficiency = transfer_efficiency(traj, system.target_level);
  const auto last = static_cast<Eigen::Index>(traj.size() - 1);
  r.final_trace = traj.trace.back();
  r.total_loss = 1.0 - r.final_trace;
  r.final_populations.resize(traj.levels());
  for (std::size_t k = 0; k < traj.levels(); ++k)
    r.final_populations[k] = traj.populations(last, static_cast<Eigen::Index>(k));

  std::vector<std::size_t> all(traj.levels());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  r.peaks = peak_populations(traj, all);
  for (const std::size_t k : intermediate_ground_levels(system))
    r.max_intermediate_ground_peak = std::max(r.max_intermediate_ground_peak, r.peaks[k].p_peak);

  try {
    r.adiabaticity = adiabaticity_metrics(system, traj.times.front(), traj.times.back());
  } catch (const AnalysisError&) {
    r.adiabaticity.reset();
  }
  try {
    r.predicted_dark_survival = dark_survival_prediction(system, traj.times);
  } catch (const AnalysisError&) {
    r.predicted_dark_survival.reset();
  }
  r.stats = traj.stats;
  r.min_eigenvalue = traj.min_eigenvalue;
  r.max_hermiticity_drift = traj.max_hermiticity_drift;
  return r;
}

nlohmann::json to_json(const AdiabaticityMetrics& m) {
  return {
      {"max_theta_dot_over_omega_eff", m.max_theta_dot_over_omega},
      {"omega_eff_t_tr", m.omega_eff_t_tr},
      {"transfer_time_s", m.transfer_time},
      {"overlap_start_s", m.overlap_start},
      {"overlap_end_s", m.overlap_end},
      {"adiabatic", m.adiabatic},
  };
}

nlohmann::json to_json(const TransferReport& r, const ChainSystem& system) {
  nlohmann::json peaks = nlohmann::json::array();
  for (const PopulationPeak& p : r.peaks)
    peaks.push_back({{"level", p.level}, {"label", system.levels[p.level].label}, {"t_peak_s", p.t_peak},
                     {"p_peak", p.p_peak}});
  nlohmann::json finals = nlohmann::json::object();
  for (std::size_t k = 0; k < r.final_populations.size(); ++k)
    finals[system.levels[k].label] = r.final_populations[k];

  nlohmann::json j = {
      {"efficiency", r.efficiency.value},
      {"saturated", r.efficiency.saturated},
      {"target_level", r.target_level},
      {"target_label", r.target_label},
      {"total_loss", r.total_loss},
      {"final_trace", r.final_trace},
      {"final_populations", finals},
      {"peak_populations", peaks},
      {"max_intermediate_ground_peak", r.max_intermediate_ground_peak},
      {"adiabaticity", r.adiabaticity ? to_json(*r.adiabaticity) : nlohmann::json(nullptr)},
      {"predicted_dark_survival",
       r.predicted_dark_survival ? nlohmann::json(*r.predicted_dark_survival) : nlohmann::json(nullptr)},
      {"integrator",
       {{"accepted_steps", r.stats.accepted},
        {"rejected_steps", r.stats.rejected},
        {"rhs_evaluations", r.stats.rhs_evaluations},
        {"min_density_eigenvalue", r.min_eigenvalue},
        {"max_hermiticity_drift", r.max_hermiticity_drift}}},
  };
  return j;
}

}  // namespace cstirap
