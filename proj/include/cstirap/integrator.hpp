#pragma once

// Adaptive Dormand-Prince 5(4) integrator for complex linear ODE systems.
// Steps are clipped so that every requested stop time is hit exactly.

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>

namespace cstirap {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double initial_step = 0.0;  // 0 selects the step automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  double last_error_estimate = 0.0;  // scaled error norm of the last accepted step
};

using ComplexVector = Eigen::VectorXcd;
using OdeRhs = std::function<void(double t, const ComplexVector& y, ComplexVector& dydt)>;
using StopObserver = std::function<void(std::size_t index, double t, const ComplexVector& y)>;
/// Applied to the state after each accepted step (e.g. re-symmetrization).
using StepProjection = std::function<void(double t, ComplexVector& y)>;

/// Integrates y from t0 through every time in `stops` (monotone in one
/// direction, forward or backward), calling `observe` at each stop.
/// Throws IntegrationError on step-size underflow or when max_steps is hit.
IntegratorStats integrate_dopri5(const OdeRhs& rhs, ComplexVector& y, double t0, std::span<const double> stops,
                                 const StopObserver& observe, const IntegratorOptions& options,
                                 const StepProjection& project = {});

}  // namespace cstirap
