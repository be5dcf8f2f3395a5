#pragma once

// Rotating-frame chain Hamiltonian, dark states and the adiabatic frame.
//
// Level ordering is (g1, e1, g2, e2, ..., gk): index 0 is the initial level.
// With hbar = 1 the Hamiltonian is real symmetric and tridiagonal:
//   H(i, i+1) = H(i+1, i) = -Omega_{i+1}(t),  H(i, i) = Delta_i (0 on ground levels).

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cstirap/chain_model.hpp"

namespace cstirap {

class DegenerateDriveError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adjacent eigenvector columns could not be matched (overlap below 0.5).
class FrameBreakdownError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instantaneous Rabi frequencies, one per coupling.
[[nodiscard]] Eigen::VectorXd rabi_frequencies(const ChainSystem& system, double t);
[[nodiscard]] Eigen::VectorXd detunings(const ChainSystem& system);
[[nodiscard]] Eigen::VectorXd loss_rates(const ChainSystem& system);

[[nodiscard]] Eigen::MatrixXd build_hamiltonian(const ChainSystem& system, double t);
[[nodiscard]] Eigen::MatrixXd chain_hamiltonian(const Eigen::VectorXd& rabi, const Eigen::VectorXd& detuning);

struct DarkState {
  Eigen::VectorXd amplitudes;  // unit norm, zero on excited levels
  std::vector<bool> support;   // levels with nonzero amplitude
};

/// Closed-form dark state of the five-level chain for couplings (g1-e1, e1-g2,
/// g2-e2, e2-g3) = (omega1, omega2, omega3, omega4).
[[nodiscard]] DarkState dark_state_analytic5(double omega1, double omega2, double omega3, double omega4);

/// Orthonormal basis of the kernel vectors of H with no excited-level
/// amplitude (ground levels at even indices). Singular values below 1e-10 of
/// the largest count as zero. Empty when the chain has no dark state.
[[nodiscard]] std::vector<DarkState> dark_states_numeric(const Eigen::MatrixXd& hamiltonian);

/// Mixing angle tan(theta) = pump / stokes; nullopt when both vanish.
[[nodiscard]] std::optional<double> mixing_angle(double pump, double stokes);

struct AdiabaticFrame {
  double time = 0.0;
  std::optional<double> theta;  // undefined when pump and Stokes both vanish
  double omega_eff = 0.0;       // sqrt(pump^2 + stokes^2)
  double xi = 0.0;              // omega_eff / Omega0 (five-level chains), else 0
  Eigen::VectorXd eigenvalues;  // one per column of w
  Eigen::MatrixXd w;            // columns are adiabatic states in the bare basis
  Eigen::Index dark_index = 0;  // column with the largest ground-level weight among near-zero eigenvalues
};

/// Diagonalizes H(t) with the standalone sign convention: eigenvalues
/// ascending, each column's largest-magnitude component positive.
[[nodiscard]] AdiabaticFrame adiabatic_frame(const ChainSystem& system, double t);

/// Produces frames that are continuous along one trajectory: each new frame's
/// columns are matched to the previously returned frame by maximal overlap and
/// sign-aligned with it. Not thread-safe; use one tracker per trajectory.
class FrameTracker {
 public:
  explicit FrameTracker(ChainSystem system);

  /// Frame at t aligned to the last frame returned (the standalone frame for the first call).
  const AdiabaticFrame& frame_at(double t);

  /// Aligns `frame` to `reference` without touching tracker state.
  static void align(AdiabaticFrame& frame, const Eigen::MatrixXd& reference, double* min_overlap = nullptr);

  [[nodiscard]] double min_overlap() const { return min_overlap_; }
  [[nodiscard]] const ChainSystem& system() const { return system_; }

 private:
  ChainSystem system_;
  std::optional<AdiabaticFrame> last_;
  double min_overlap_ = 1.0;
};

/// Central-difference nonadiabatic coupling K = W^T (W(t+h) - W(t-h)) / (2h),
/// antisymmetrized. Frames must already be gauge-aligned. Throws
/// StepTooLargeError when the dimensionless antisymmetry residual exceeds 1e-6.
[[nodiscard]] Eigen::MatrixXd nonadiabatic_coupling(const Eigen::MatrixXd& w_minus, const Eigen::MatrixXd& w,
                                                    const Eigen::MatrixXd& w_plus, double h);

/// Aligned frames at t - h, t, t + h followed by the coupling matrix.
[[nodiscard]] Eigen::MatrixXd nonadiabatic_coupling(FrameTracker& tracker, double t, double h);

}  // namespace cstirap
