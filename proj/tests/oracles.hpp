#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library under test.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// Eigenvalues of the five-level resonant chain with couplings (a, b, c, d)
/// from det(lambda - H) = lambda (lambda^4 - S lambda^2 + P), sorted ascending.
inline std::array<double, 5> five_level_eigenvalues(double a, double b, double c, double d) {
  const double s = a * a + b * b + c * c + d * d;
  const double p = a * a * c * c + a * a * d * d + b * b * d * d;
  const double disc = std::sqrt(s * s - 4.0 * p);
  const double mu_big = 0.5 * (s + disc);
  const double mu_small = p / mu_big;  // avoids cancellation in (s - disc) / 2
  std::array<double, 5> ev{-std::sqrt(mu_big), -std::sqrt(mu_small), 0.0, std::sqrt(mu_small), std::sqrt(mu_big)};
  return ev;
}

/// Leading-order eigenvalues {0, +-Omega/sqrt2, +-sqrt2 Omega0}, sorted.
inline std::array<double, 5> five_level_eigenvalues_approx(double omega_eff, double omega0) {
  const double lo = omega_eff / std::sqrt(2.0), hi = std::sqrt(2.0) * omega0;
  return {-hi, -lo, 0.0, lo, hi};
}

/// Dark state of a resonant chain g1-e1-g2-...-gM by forward recursion over the
/// excited rows: omega_{2k} c_k + omega_{2k+1} c_{k+1} = 0 (0-based coupling index).
inline Eigen::VectorXd chain_dark_state(const std::vector<double>& omega) {
  const std::size_t n = omega.size() + 1;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  double c = 1.0;
  v(0) = c;
  for (std::size_t k = 0; 2 * k + 1 < omega.size(); ++k) {
    c = -c * omega[2 * k] / omega[2 * k + 1];
    v(static_cast<Eigen::Index>(2 * k + 2)) = c;
  }
  return v / v.norm();
}

/// Resonant two-level system with H = [[0, -W], [-W, 0]]: P_excited(t) = sin^2(W t).
inline double two_level_excited(double rabi, double t) {
  const double s = std::sin(rabi * t);
  return s * s;
}

/// exp(A) by scaling and squaring of a degree-18 Taylor polynomial.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXcd scaled = a / std::pow(2.0, squarings);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k <= 18; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// State after constant non-Hermitian evolution psi(t) = exp(-i H t) psi0.
inline Eigen::VectorXcd evolve_constant(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi0, double t) {
  return expm(Complex(0.0, -t) * h) * psi0;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Rotation in the (i, j) plane by angle theta; its derivative couples i and j at rate dtheta/dt.
inline Eigen::MatrixXd plane_rotation(Eigen::Index n, Eigen::Index i, Eigen::Index j, double theta) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
  r(i, i) = std::cos(theta);
  r(j, j) = std::cos(theta);
  r(i, j) = -std::sin(theta);
  r(j, i) = std::sin(theta);
  return r;
}

/// Peak intensity I = eps0 c E^2 / 2 for Rabi frequency W = mu E / (2 hbar), in W/cm^2.
inline double intensity_w_cm2(double rabi, double dipole_debye) {
  constexpr double hbar = 1.054571817e-34, c = 299792458.0, eps0 = 8.8541878128e-12;
  constexpr double debye = 3.33564095198152e-30;
  const double e_field = 2.0 * hbar * rabi / (dipole_debye * debye);
  return 0.5 * eps0 * c * e_field * e_field * 1e-4;
}

}  // namespace oracle
