#include "cstirap/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "cstirap/hamiltonian.hpp"

namespace cstirap {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

IntegratorOptions integrator_options(const SimulationGrid& grid, const PropagationOptions& options) {
  IntegratorOptions opt;
  opt.rel_tol = grid.rel_tol;
  opt.abs_tol = grid.abs_tol;
  opt.max_step = options.max_step;
  return opt;
}

Trajectory empty_trajectory(const std::vector<double>& times, std::size_t n) {
  Trajectory traj;
  traj.times = times;
  traj.populations.resize(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(n));
  traj.trace.resize(times.size());
  return traj;
}

double min_eigenvalue(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void record_density(Trajectory& traj, std::size_t i, const Eigen::MatrixXcd& rho, bool store) {
  const auto row = static_cast<Eigen::Index>(i);
  for (Eigen::Index k = 0; k < rho.rows(); ++k) traj.populations(row, k) = rho(k, k).real();
  traj.trace[i] = rho.trace().real();
  const double m = min_eigenvalue(rho);
  traj.min_eigenvalue = std::isnan(traj.min_eigenvalue) ? m : std::min(traj.min_eigenvalue, m);
  if (store) traj.density.push_back(rho);
}

void check_square(const Eigen::MatrixXcd& rho, std::size_t n) {
  if (rho.rows() != static_cast<Eigen::Index>(n) || rho.cols() != static_cast<Eigen::Index>(n))
    throw ValidationError("initial density matrix has the wrong dimension");
}

}  // namespace

Eigen::MatrixXcd effective_hamiltonian(const ChainSystem& system, double t) {
  Eigen::MatrixXcd h = build_hamiltonian(system, t).cast<Complex>();
  for (std::size_t i = 0; i < system.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    h(k, k) -= 0.5 * kI * system.levels[i].loss_rate;
  }
  return h;
}

Eigen::VectorXcd basis_state(std::size_t dimension, std::size_t level) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension));
  v[static_cast<Eigen::Index>(level)] = 1.0;
  return v;
}

Eigen::MatrixXcd basis_density(std::size_t dimension, std::size_t level) {
  const Eigen::VectorXcd v = basis_state(dimension, level);
  return v * v.adjoint();
}

Trajectory propagate_state(const ChainSystem& system, const SimulationGrid& grid, const Eigen::VectorXcd& psi0,
                           const PropagationOptions& options) {
  const std::size_t n = system.size();
  if (psi0.size() != static_cast<Eigen::Index>(n)) throw ValidationError("initial state has the wrong dimension");
  if (psi0.squaredNorm() > 1.0 + 1e-12) throw ValidationError("initial state norm exceeds 1");

  const std::vector<double> times = grid.times();
  Trajectory traj = empty_trajectory(times, n);

  const OdeRhs rhs = [&system](double t, const ComplexVector& y, ComplexVector& dy) {
    dy.noalias() = -kI * (effective_hamiltonian(system, t) * y);
  };
  const StopObserver observe = [&](std::size_t i, double, const ComplexVector& y) {
    const auto row = static_cast<Eigen::Index>(i);
    traj.populations.row(row) = y.cwiseAbs2().transpose();
    traj.trace[i] = y.squaredNorm();
    if (options.store_states) traj.density.push_back(y * y.adjoint());
  };

  ComplexVector y = psi0;
  traj.stats = integrate_dopri5(rhs, y, times.front(), times, observe, integrator_options(grid, options));
  return traj;
}

Eigen::VectorXcd evolve_state(const ChainSystem& system, Eigen::VectorXcd psi, double t_from, double t_to,
                              const IntegratorOptions& options, IntegratorStats* stats) {
  const OdeRhs rhs = [&system](double t, const ComplexVector& y, ComplexVector& dy) {
    dy.noalias() = -kI * (effective_hamiltonian(system, t) * y);
  };
  const double stop[] = {t_to};
  const IntegratorStats s = integrate_dopri5(rhs, psi, t_from, stop, {}, options);
  if (stats) *stats = s;
  return psi;
}

Trajectory propagate_density(const ChainSystem& system, const SimulationGrid& grid, const Eigen::MatrixXcd& rho0,
                             const PropagationOptions& options) {
  const std::size_t n = system.size();
  check_square(rho0, n);
  const auto dim = static_cast<Eigen::Index>(n);

  const std::vector<double> times = grid.times();
  Trajectory traj = empty_trajectory(times, n);

  const OdeRhs rhs = [&system, dim](double t, const ComplexVector& y, ComplexVector& dy) {
    const Eigen::MatrixXcd h = effective_hamiltonian(system, t);
    const Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
    Eigen::Map<Eigen::MatrixXcd> out(dy.data(), dim, dim);
    out.noalias() = -kI * (h * rho);
    out.noalias() += kI * (rho * h.adjoint());
  };
  const StepProjection symmetrize = [&traj, dim](double t, ComplexVector& y) {
    Eigen::Map<Eigen::MatrixXcd> rho(y.data(), dim, dim);
    const double drift = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    traj.max_hermiticity_drift = std::max(traj.max_hermiticity_drift, drift);
    if (drift > 1e-8)
      throw IntegrationError("density matrix lost Hermiticity (drift " + std::to_string(drift) +
                             ") at t = " + std::to_string(t));
    const Eigen::MatrixXcd sym = 0.5 * (rho + rho.adjoint());
    rho = sym;
  };
  const StopObserver observe = [&](std::size_t i, double, const ComplexVector& y) {
    const Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), dim, dim);
    record_density(traj, i, rho, options.store_states);
  };

  ComplexVector y = Eigen::Map<const ComplexVector>(rho0.data(), dim * dim);
  traj.stats = integrate_dopri5(rhs, y, times.front(), times, observe, integrator_options(grid, options), symmetrize);
  return traj;
}

AdiabaticTrajectory propagate_adiabatic5(const ChainSystem& system, const SimulationGrid& grid,
                                         const Eigen::MatrixXcd& rho_a0, const PropagationOptions& options) {
  if (system.size() != 5) throw ValidationError("adiabatic-basis propagation needs a five-level chain");
  const PulseEnvelope& mid1 = system.couplings[1].drive;
  const PulseEnvelope& mid2 = system.couplings[2].drive;
  if (mid1.time_dependent() || mid2.time_dependent() || mid1.peak_rabi != mid2.peak_rabi || !(mid1.peak_rabi > 0.0))
    throw ValidationError("adiabatic-basis propagation needs equal constant middle couplings Omega2 = Omega3 > 0");
  check_square(rho_a0, 5);

  double min_width = std::numeric_limits<double>::infinity();
  for (const Coupling& c : system.couplings)
    if (c.drive.time_dependent()) min_width = std::min(min_width, c.drive.width);
  if (!std::isfinite(min_width)) min_width = grid.t_end - grid.t_start;
  const double fd_step = 1e-4 * min_width;

  PropagationOptions local = options;
  local.max_step = std::min(options.max_step, min_width / 20.0);

  const std::vector<double> times = grid.times();
  AdiabaticTrajectory out;
  out.adiabatic = empty_trajectory(times, 5);
  out.bare = empty_trajectory(times, 5);

  FrameTracker tracker(system);
  // Seed the tracker with the standalone frame at t_start so that rho_a0's basis is the reference.
  out.dark_index = tracker.frame_at(grid.t_start).dark_index;
  const Eigen::MatrixXd loss = loss_rates(system).asDiagonal();

  const OdeRhs rhs = [&](double t, const ComplexVector& y, ComplexVector& dy) {
    const AdiabaticFrame centre = tracker.frame_at(t);
    AdiabaticFrame minus = adiabatic_frame(system, t - fd_step);
    AdiabaticFrame plus = adiabatic_frame(system, t + fd_step);
    FrameTracker::align(minus, centre.w);
    FrameTracker::align(plus, centre.w);
    const Eigen::MatrixXcd k = nonadiabatic_coupling(minus.w, centre.w, plus.w, fd_step).cast<Complex>();
    const Eigen::MatrixXcd d = (centre.w.transpose() * loss * centre.w).cast<Complex>();

    const Eigen::Map<const Eigen::MatrixXcd> rho(y.data(), 5, 5);
    Eigen::Map<Eigen::MatrixXcd> out_rho(dy.data(), 5, 5);
    // -i [H^a, rho]: H^a diagonal.
    for (Eigen::Index c = 0; c < 5; ++c)
      for (Eigen::Index r = 0; r < 5; ++r)
        out_rho(r, c) = -kI * (centre.eigenvalues[r] - centre.eigenvalues[c]) * rho(r, c);
    out_rho.noalias() -= k * rho;
    out_rho.noalias() += rho * k;
    out_rho.noalias() -= 0.5 * (d * rho);
    out_rho.noalias() -= 0.5 * (rho * d);
  };
  const StopObserver observe = [&](std::size_t i, double t, const ComplexVector& y) {
    const Eigen::Map<const Eigen::MatrixXcd> rho_a(y.data(), 5, 5);
    const Eigen::MatrixXcd w = tracker.frame_at(t).w.cast<Complex>();
    record_density(out.adiabatic, i, rho_a, options.store_states);
    record_density(out.bare, i, w * rho_a * w.transpose(), options.store_states);
  };
  const StepProjection symmetrize = [](double, ComplexVector& y) {
    Eigen::Map<Eigen::MatrixXcd> rho(y.data(), 5, 5);
    const Eigen::MatrixXcd sym = 0.5 * (rho + rho.adjoint());
    rho = sym;
  };

  ComplexVector y = Eigen::Map<const ComplexVector>(rho_a0.data(), 25);
  out.adiabatic.stats =
      integrate_dopri5(rhs, y, times.front(), times, observe, integrator_options(grid, local), symmetrize);
  out.bare.stats = out.adiabatic.stats;
  out.min_frame_overlap = tracker.min_overlap();
  return out;
}

}  // namespace cstirap
