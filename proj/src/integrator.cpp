#include "cstirap/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cstirap {

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
// Fifth-order weights minus embedded fourth-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

double scaled_norm(const ComplexVector& v, const ComplexVector& y0, const ComplexVector& y1,
                   const IntegratorOptions& opt) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = std::abs(v[i]) / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(v.size(), 1)));
}

double initial_step(const OdeRhs& rhs, double t0, const ComplexVector& y0, const ComplexVector& f0, double dir,
                    const IntegratorOptions& opt, IntegratorStats& stats) {
  const double d0 = scaled_norm(y0, y0, y0, opt);
  const double d1 = scaled_norm(f0, y0, y0, opt);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, opt.max_step);
  ComplexVector y1 = y0 + dir * h0 * f0;
  ComplexVector f1(y0.size());
  rhs(t0 + dir * h0, y1, f1);
  ++stats.rhs_evaluations;
  const double d2 = scaled_norm(f1 - f0, y0, y0, opt) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, opt.max_step});
}

}  // namespace

IntegratorStats integrate_dopri5(const OdeRhs& rhs, ComplexVector& y, double t0, std::span<const double> stops,
                                 const StopObserver& observe, const IntegratorOptions& opt,
                                 const StepProjection& project) {
  IntegratorStats stats;
  if (stops.empty()) return stats;
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
    throw IntegrationError("integrator tolerances must be positive");

  const double dir = stops.back() >= t0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < stops.size(); ++i) {
    const double prev = i == 0 ? t0 : stops[i - 1];
    if (dir * (stops[i] - prev) < 0.0) throw IntegrationError("stop times must be monotone");
  }

  const Eigen::Index n = y.size();
  ComplexVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n), err(n);

  double t = t0;
  rhs(t, y, k1);
  ++stats.rhs_evaluations;

  double h = opt.initial_step > 0.0 ? std::min(opt.initial_step, opt.max_step)
                                    : initial_step(rhs, t, y, k1, dir, opt, stats);
  bool last_rejected = false;

  for (std::size_t stop = 0; stop < stops.size(); ++stop) {
    const double target = stops[stop];
    while (dir * (target - t) > 0.0) {
      if (stats.accepted + stats.rejected >= opt.max_steps)
        throw IntegrationError("maximum number of integrator steps exceeded at t = " + std::to_string(t));

      const double remaining = std::abs(target - t);
      bool clipped = false;
      double step = std::min(h, opt.max_step);
      if (step >= remaining) {
        step = remaining;
        clipped = true;
      }
      if (step <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1e-300))
        throw IntegrationError("step size underflow at t = " + std::to_string(t));
      const double hs = dir * step;

      tmp = y + hs * (a21 * k1);
      rhs(t + c2 * hs, tmp, k2);
      tmp = y + hs * (a31 * k1 + a32 * k2);
      rhs(t + c3 * hs, tmp, k3);
      tmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * hs, tmp, k4);
      tmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * hs, tmp, k5);
      tmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      const double t_next = clipped ? target : t + hs;
      rhs(t + hs, tmp, k6);
      y_new = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      rhs(t_next, y_new, k7);
      stats.rhs_evaluations += 6;

      err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double err_norm = scaled_norm(err, y, y_new, opt);
      if (!std::isfinite(err_norm)) throw IntegrationError("non-finite state at t = " + std::to_string(t));

      if (err_norm <= 1.0) {
        ++stats.accepted;
        stats.last_error_estimate = err_norm;
        t = t_next;
        y.swap(y_new);
        if (project) {
          project(t, y);
          rhs(t, y, k1);
          ++stats.rhs_evaluations;
        } else {
          k1.swap(k7);
        }
        double fac = err_norm == 0.0 ? kFacMax : kSafety * std::pow(err_norm, -0.2);
        fac = std::clamp(fac, kFacMin, last_rejected ? 1.0 : kFacMax);
        // A clipped step says nothing about the natural step size; never shrink h because of it.
        h = clipped ? std::max(h, step * fac) : step * fac;
        last_rejected = false;
      } else {
        ++stats.rejected;
        h = step * std::max(kFacMin, kSafety * std::pow(err_norm, -0.2));
        last_rejected = true;
      }
    }
    if (observe) observe(stop, t, y);
  }
  return stats;
}

}  // namespace cstirap
