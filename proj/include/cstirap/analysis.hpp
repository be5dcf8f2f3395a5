#pragma once

// Physics metrics from trajectories and the analytic dark-state predictions
// (dark-state decay law, adiabaticity conditions).

#include "json.hpp"
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cstirap/chain_model.hpp"
#include "cstirap/propagator.hpp"

namespace cstirap {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EfficiencyResult {
  double value = 0.0;
  bool saturated = true;   // final |dP/dt| <= 1e-6 * max |dP/dt|
  double final_rate = 0.0;
  double max_rate = 0.0;
};

[[nodiscard]] EfficiencyResult transfer_efficiency(const Trajectory& traj, std::size_t target);

struct PopulationPeak {
  std::size_t level = 0;
  double t_peak = 0.0;
  double p_peak = 0.0;
};

/// Per-level maximum over the grid, refined by a parabola through the
/// maximum sample and its neighbours.
[[nodiscard]] std::vector<PopulationPeak> peak_populations(const Trajectory& traj,
                                                           std::span<const std::size_t> levels);

/// Dark-state decay rate of the five-level chain to order (Omega/Omega0)^2:
///   (G2 + G1 cos^2 theta) * (Omega/(2 Omega0) * sin 2theta)^2 + G1 cos^2 theta
[[nodiscard]] double dark_decay_rate(double theta, double omega_eff, double omega0, double gamma1, double gamma2);

/// exp(-integral of dark_decay_rate) by trapezoidal quadrature over `times`.
/// Needs a five-level chain with equal constant middle couplings.
[[nodiscard]] double dark_survival_prediction(const ChainSystem& system, std::span<const double> times,
                                              double gamma1, double gamma2);
/// Uses the loss rates of g1 and g2 from the system.
[[nodiscard]] double dark_survival_prediction(const ChainSystem& system, std::span<const double> times);

/// Same integral without the exponential; the Gamma2-proportional part and the
/// rest are reported separately.
struct DarkDecayExponent {
  double gamma1_part = 0.0;
  double gamma2_part = 0.0;
  [[nodiscard]] double total() const { return gamma1_part + gamma2_part; }
};
[[nodiscard]] DarkDecayExponent dark_decay_exponent(const ChainSystem& system, std::span<const double> times,
                                                    double gamma1, double gamma2);

/// theta(t) for the first (pump) and last (Stokes) couplings; undefined
/// points take the nearest defined value (held constant).
[[nodiscard]] std::vector<double> mixing_angles(const ChainSystem& system, std::span<const double> times);

struct AdiabaticityMetrics {
  double max_theta_dot_over_omega = 0.0;  // over the overlap region
  double omega_eff_t_tr = 0.0;            // min Omega_eff over the overlap region times T_tr
  double transfer_time = 0.0;             // T_tr: both pulses above 1% of their peaks
  double overlap_start = 0.0;
  double overlap_end = 0.0;
  bool adiabatic = true;                  // max_theta_dot_over_omega <= 0.1
};

/// Throws AnalysisError when pump and Stokes never both exceed 1% of peak.
[[nodiscard]] AdiabaticityMetrics adiabaticity_metrics(const ChainSystem& system, double t_start, double t_end,
                                                       std::size_t samples = 20001);

struct TransferReport {
  std::size_t target_level = 0;
  std::string target_label;
  EfficiencyResult efficiency;
  double total_loss = 0.0;
  double final_trace = 0.0;
  std::vector<double> final_populations;
  std::vector<PopulationPeak> peaks;  // every level
  double max_intermediate_ground_peak = 0.0;
  std::optional<AdiabaticityMetrics> adiabaticity;
  std::optional<double> predicted_dark_survival;  // five-level chains only
  IntegratorStats stats;
  double min_eigenvalue = 0.0;
  double max_hermiticity_drift = 0.0;
};

[[nodiscard]] TransferReport make_report(const ChainSystem& system, const Trajectory& traj);

/// Ground levels strictly between the first and last level.
[[nodiscard]] std::vector<std::size_t> intermediate_ground_levels(const ChainSystem& system);

[[nodiscard]] nlohmann::json to_json(const TransferReport& report, const ChainSystem& system);
[[nodiscard]] nlohmann::json to_json(const AdiabaticityMetrics& metrics);

}  // namespace cstirap
