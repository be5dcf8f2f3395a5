#pragma once

// Physical description of a chain-coupled multilevel system: levels, nearest
// neighbour couplings, pulse envelopes and the simulation grid.
//
// Units: every rate, detuning and Rabi frequency is an angular frequency in
// s^-1, times are in seconds, dipole moments in Debye, wavelengths in nm.
// The Rabi frequency convention is Omega = mu * E / (2 hbar), so a resonant
// two-level system driven with H = -Omega sigma_x oscillates with population
// period pi / Omega.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cstirap {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class LevelKind { ground, excited };

struct Level {
  std::string label;
  LevelKind kind = LevelKind::ground;
  double loss_rate = 0.0;  // population decay rate out of the chain, s^-1
  double detuning = 0.0;   // one-photon detuning, s^-1 (excited levels only)
};

enum class PulseShape { constant, tanh_on, tanh_off, gaussian };

/// Time-dependent Rabi envelope of one coupling.
///
///   constant : peak
///   tanh_on  : peak * (1 + tanh((t - delay/2) / width)) / 2
///   tanh_off : peak * (1 - tanh((t + delay/2) / width)) / 2
///   gaussian : peak * exp(-(t - center)^2 / width^2)
///
/// With a negative delay the tanh_off (Stokes-side) field switches off after
/// the tanh_on (pump-side) field switches on, which is the counterintuitive
/// ordering. The gaussian shape is an extension for robustness studies.
struct PulseEnvelope {
  PulseShape shape = PulseShape::constant;
  double peak_rabi = 0.0;
  double width = 0.0;
  double delay = 0.0;
  double center = 0.0;

  [[nodiscard]] bool time_dependent() const { return shape != PulseShape::constant; }
};

struct Coupling {
  std::size_t lower_index = 0;  // couples levels lower_index and lower_index + 1
  double dipole_moment = 1.0;   // Debye
  double wavelength = 0.0;      // nm, metadata only
  PulseEnvelope drive;
};

struct ChainSystem {
  std::vector<Level> levels;
  std::vector<Coupling> couplings;
  std::size_t initial_level = 0;
  std::size_t target_level = 0;

  [[nodiscard]] std::size_t size() const { return levels.size(); }
};

struct SimulationGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  std::size_t output_points = 2001;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;

  /// Uniform output times, first and last exactly t_start and t_end.
  [[nodiscard]] std::vector<double> times() const;
};

/// Checks every structural invariant and returns the system with couplings
/// sorted by lower_index. Throws ValidationError naming the first violation.
ChainSystem validate_chain(ChainSystem system);
void validate_envelope(const PulseEnvelope& pulse);
void validate_grid(const SimulationGrid& grid);

[[nodiscard]] double envelope_eval(const PulseEnvelope& pulse, double t);
[[nodiscard]] double envelope_derivative(const PulseEnvelope& pulse, double t);

/// Earliest and latest switching time over all time-dependent envelopes,
/// widened by `widths` times the largest envelope width. Systems without
/// time-dependent envelopes get [0, 1] s.
[[nodiscard]] std::pair<double, double> default_window(const ChainSystem& system,
                                                       double widths = 8.0);

// Physical constants (SI, CODATA 2018).
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kSpeedOfLight = 299792458.0;      // m / s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F / m
inline constexpr double kDebye = 3.33564095198152e-30;    // C m

/// Rabi frequency (s^-1) for a transition dipole in Debye driven by a field of
/// the given peak intensity (W/cm^2), with I = eps0 c E^2 / 2.
[[nodiscard]] double rabi_from_intensity(double dipole_debye, double intensity_w_per_cm2);
[[nodiscard]] double intensity_from_rabi(double dipole_debye, double rabi);

/// Collisional loss rate k_inel * n_at with k in cm^3/s and n in cm^-3.
[[nodiscard]] double collision_decay_rate(double k_inel_cm3_per_s, double density_per_cm3);

}  // namespace cstirap
