#pragma once

// Open-system time evolution of a chain: pure states under the non-Hermitian
// Hamiltonian H - (i/2) diag(loss), density matrices under
//   d rho/dt = -i [H, rho] - 1/2 {D, rho},   D = diag(loss),
// and the five-level density matrix in the adiabatic basis. Lost population
// leaves the simulated manifold; nothing is refed into chain levels.

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "cstirap/chain_model.hpp"
#include "cstirap/integrator.hpp"

namespace cstirap {

struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd populations;  // rows: output times, columns: levels
  std::vector<double> trace;    // total population (norm^2 or tr rho)
  std::vector<Eigen::MatrixXcd> density;  // full state per output time when requested
  IntegratorStats stats;
  double min_eigenvalue = std::numeric_limits<double>::quiet_NaN();  // density runs only
  double max_hermiticity_drift = 0.0;

  [[nodiscard]] std::size_t size() const { return times.size(); }
  [[nodiscard]] std::size_t levels() const { return static_cast<std::size_t>(populations.cols()); }
};

struct PropagationOptions {
  bool store_states = false;
  double max_step = std::numeric_limits<double>::infinity();
};

[[nodiscard]] Eigen::MatrixXcd effective_hamiltonian(const ChainSystem& system, double t);

[[nodiscard]] Eigen::VectorXcd basis_state(std::size_t dimension, std::size_t level);
[[nodiscard]] Eigen::MatrixXcd basis_density(std::size_t dimension, std::size_t level);

/// Pure-state evolution dC/dt = -i H_eff(t) C sampled on grid.times().
[[nodiscard]] Trajectory propagate_state(const ChainSystem& system, const SimulationGrid& grid,
                                         const Eigen::VectorXcd& psi0, const PropagationOptions& options = {});

/// Pure-state evolution between two times in either direction.
[[nodiscard]] Eigen::VectorXcd evolve_state(const ChainSystem& system, Eigen::VectorXcd psi, double t_from,
                                            double t_to, const IntegratorOptions& options,
                                            IntegratorStats* stats = nullptr);

/// Density-matrix evolution; rho is re-symmetrized after every step and the
/// smallest eigenvalue over the output grid is recorded. Hermiticity drift
/// above 1e-8 raises IntegrationError.
[[nodiscard]] Trajectory propagate_density(const ChainSystem& system, const SimulationGrid& grid,
                                           const Eigen::MatrixXcd& rho0, const PropagationOptions& options = {});

struct AdiabaticTrajectory {
  Trajectory adiabatic;  // populations of the adiabatic states, in tracked column order
  Trajectory bare;       // W rho^a W^T, populations in the bare basis
  Eigen::Index dark_index = 0;
  double min_frame_overlap = 1.0;
};

/// Five-level adiabatic-basis density matrix equation
///   d rho^a/dt = -i [H^a, rho^a] - [W^T dW/dt, rho^a] - 1/2 {W^T D W, rho^a}
/// with H^a = diag(eigenvalues). rho_a0 is expressed in the standalone frame
/// at grid.t_start (see adiabatic_frame). Requires the two middle couplings to
/// be equal and constant. Frame breakdown raises FrameBreakdownError.
[[nodiscard]] AdiabaticTrajectory propagate_adiabatic5(const ChainSystem& system, const SimulationGrid& grid,
                                                       const Eigen::MatrixXcd& rho_a0,
                                                       const PropagationOptions& options = {});

}  // namespace cstirap
