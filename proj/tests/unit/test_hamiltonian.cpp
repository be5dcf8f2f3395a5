#include "doctest.h"

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "cstirap/hamiltonian.hpp"
#include "cstirap/scenarios.hpp"

using namespace cstirap;

namespace {

ChainSystem constant_chain(const std::vector<double>& rabi, const std::vector<double>& detuning = {}) {
  ChainSystem s;
  for (std::size_t k = 0; k <= rabi.size(); ++k) {
    const bool ground = k % 2 == 0;
    s.levels.push_back({(ground ? "g" : "e") + std::to_string(k), ground ? LevelKind::ground : LevelKind::excited, 0.0,
                        k < detuning.size() ? detuning[k] : 0.0});
  }
  for (std::size_t k = 0; k < rabi.size(); ++k) {
    Coupling c;
    c.lower_index = k;
    c.drive.shape = PulseShape::constant;
    c.drive.peak_rabi = rabi[k];
    s.couplings.push_back(c);
  }
  s.target_level = rabi.size();
  return validate_chain(std::move(s));
}

double phase_free_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

}  // namespace

TEST_CASE("hamiltonian is symmetric tridiagonal with -Omega couplings and excited detunings") {
  const ChainSystem s = constant_chain({1e7, 2e7, 3e7, 4e7}, {0, 5e6, 0, -5e6, 0});
  const Eigen::MatrixXd h = build_hamiltonian(s, 0.0);
  CHECK(h.isApprox(h.transpose()));
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j)
      if (std::abs(i - j) > 1) CHECK(h(i, j) == 0.0);
  CHECK(h(0, 1) == -1e7);
  CHECK(h(3, 4) == -4e7);
  CHECK(h(1, 1) == 5e6);
  CHECK(h(3, 3) == -5e6);
  CHECK(h(0, 0) == 0.0);
}

TEST_CASE("analytic five-level dark state matches the chain recursion") {
  const std::vector<double> omega{2e7, 1e8, 1e8, 5e6};
  const DarkState d = dark_state_analytic5(omega[0], omega[1], omega[2], omega[3]);
  CHECK(phase_free_distance(d.amplitudes, oracle::chain_dark_state(omega)) < 1e-14);
  CHECK(d.amplitudes.norm() == doctest::Approx(1.0));
}

TEST_CASE("pump off leaves the dark state on the initial level") {
  const DarkState d = dark_state_analytic5(0.0, 1e8, 1e8, 1e7);
  CHECK(std::abs(d.amplitudes(0)) == doctest::Approx(1.0));
  CHECK(d.amplitudes.tail(4).norm() < 1e-15);
  const auto numeric = dark_states_numeric(chain_hamiltonian((Eigen::VectorXd(4) << 0.0, 1e8, 1e8, 1e7).finished(),
                                                             Eigen::VectorXd::Zero(5)));
  REQUIRE(numeric.size() == 1);
  CHECK(std::abs(numeric[0].amplitudes(0)) == doctest::Approx(1.0));
}

TEST_CASE("numeric dark states of random chains") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(std::log(1e5), std::log(1e9));
  for (int n : {3, 5, 7, 9}) {
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> omega(static_cast<std::size_t>(n - 1));
      for (double& w : omega) w = std::exp(u(rng));
      const Eigen::MatrixXd h = chain_hamiltonian(Eigen::Map<Eigen::VectorXd>(omega.data(), n - 1), Eigen::VectorXd::Zero(n));
      const auto dark = dark_states_numeric(h);
      REQUIRE(dark.size() == 1);
      const Eigen::VectorXd& v = dark[0].amplitudes;
      CHECK((h * v).norm() <= 1e-12 * h.norm());
      for (Eigen::Index k = 1; k < n; k += 2) CHECK(v(k) == 0.0);
      CHECK(phase_free_distance(v, oracle::chain_dark_state(omega)) < 1e-10);
    }
  }
}

TEST_CASE("a broken chain has two dark states") {
  const Eigen::MatrixXd h =
      chain_hamiltonian((Eigen::VectorXd(4) << 0.0, 2e7, 3e7, 0.0).finished(), Eigen::VectorXd::Zero(5));
  const auto dark = dark_states_numeric(h);
  CHECK(dark.size() == 2);
  for (const DarkState& d : dark) CHECK((h * d.amplitudes).norm() <= 1e-12 * h.norm());
}

TEST_CASE("mixing angle") {
  CHECK(*mixing_angle(1.0, 1.0) == doctest::Approx(M_PI / 4));
  CHECK(*mixing_angle(0.0, 2.0) == 0.0);
  CHECK(*mixing_angle(3.0, 0.0) == doctest::Approx(M_PI / 2));
  CHECK_FALSE(mixing_angle(0.0, 0.0).has_value());
}

TEST_CASE("adiabatic frame eigenvalues follow the characteristic polynomial") {
  for (double xi : {0.02, 0.1, 0.4}) {
    for (double theta : {0.1, 0.7, 1.4}) {
      const double omega = xi * 1e8, a = omega * std::sin(theta), d = omega * std::cos(theta);
      const AdiabaticFrame f = adiabatic_frame(constant_chain({a, 1e8, 1e8, d}), 0.0);
      const auto exact = oracle::five_level_eigenvalues(a, 1e8, 1e8, d);
      for (int k = 0; k < 5; ++k) CHECK(f.eigenvalues(k) == doctest::Approx(exact[k]).epsilon(1e-12).scale(1e8));
      CHECK(f.xi == doctest::Approx(xi));
      CHECK(*f.theta == doctest::Approx(theta));
      CHECK((f.w.transpose() * f.w - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-12);
      const Eigen::VectorXd dark = f.w.col(f.dark_index);
      CHECK(phase_free_distance(dark, dark_state_analytic5(a, 1e8, 1e8, d).amplitudes) < 1e-10);
    }
  }
}

TEST_CASE("standalone frames fix each column's largest component positive") {
  const AdiabaticFrame f = adiabatic_frame(constant_chain({3e6, 1e8, 1e8, 4e6}), 0.0);
  for (Eigen::Index c = 0; c < 5; ++c) {
    Eigen::Index i = 0;
    f.w.col(c).cwiseAbs().maxCoeff(&i);
    CHECK(f.w(i, c) > 0.0);
  }
}

TEST_CASE("tracked frames stay continuous through the pulse sequence") {
  const ScenarioPreset p = preset_five_level();
  FrameTracker tracker(p.system);
  Eigen::MatrixXd previous = tracker.frame_at(p.grid.t_start).w;
  double worst = 1.0;
  for (int i = 1; i <= 4000; ++i) {
    const double t = p.grid.t_start + (p.grid.t_end - p.grid.t_start) * i / 4000.0;
    const Eigen::MatrixXd w = tracker.frame_at(t).w;
    for (Eigen::Index c = 0; c < 5; ++c) worst = std::min(worst, w.col(c).dot(previous.col(c)));
    previous = w;
  }
  CHECK(worst > 0.9);
  CHECK(tracker.min_overlap() >= 0.5);
}

TEST_CASE("nonadiabatic coupling of a plane rotation is the rotation rate") {
  // W(t) rotates levels 0 and 2 at angular rate 3e5 s^-1.
  const double rate = 3e5, t = 1e-6, h = 1e-9;
  auto w = [&](double s) { return oracle::plane_rotation(5, 0, 2, rate * s); };
  const Eigen::MatrixXd k = nonadiabatic_coupling(w(t - h), w(t), w(t + h), h);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(5, 5);
  expected(2, 0) = rate;
  expected(0, 2) = -rate;
  CHECK((k - expected).norm() <= 1e-6 * rate);
  CHECK((k + k.transpose()).norm() == 0.0);
}

TEST_CASE("three-level dark-bright coupling equals dtheta/dt") {
  // Lambda system: the dark state (cos th, 0, -sin th) couples to its bright partner at theta-dot.
  ChainSystem s;
  s.levels = {{"g1", LevelKind::ground, 0, 0}, {"e", LevelKind::excited, 0, 0}, {"g2", LevelKind::ground, 0, 0}};
  Coupling pump, stokes;
  pump.lower_index = 0;
  pump.drive = {PulseShape::tanh_on, 1e7, 1e-6, -2e-6, 0.0};
  stokes.lower_index = 1;
  stokes.drive = {PulseShape::tanh_off, 1e7, 1e-6, -2e-6, 0.0};
  s.couplings = {pump, stokes};
  s.target_level = 2;
  s = validate_chain(std::move(s));
  FrameTracker tracker(s);
  for (double t : {-1.5e-6, -0.3e-6, 0.0, 0.8e-6}) {
    const Eigen::MatrixXd k = nonadiabatic_coupling(tracker, t, 1e-10);
    const AdiabaticFrame& f = tracker.frame_at(t);
    const double p = envelope_eval(pump.drive, t), q = envelope_eval(stokes.drive, t);
    const double dp = envelope_derivative(pump.drive, t), dq = envelope_derivative(stokes.drive, t);
    const double theta_dot = (dp * q - p * dq) / (p * p + q * q);
    // |<dark| d/dt |others>| summed in quadrature is |theta-dot|
    Eigen::VectorXd row = k.row(f.dark_index);
    CHECK(row.norm() == doctest::Approx(std::abs(theta_dot)).epsilon(1e-5));
  }
}

TEST_CASE("oversized finite-difference step is refused") {
  const ScenarioPreset p = preset_five_level();
  FrameTracker tracker(p.system);
  CHECK_THROWS_AS((void)nonadiabatic_coupling(tracker, -1e-6, 5e-7), StepTooLargeError);
}

TEST_CASE("all-zero drive has no defined frame angle") {
  const AdiabaticFrame f = adiabatic_frame(constant_chain({0.0, 1e8, 1e8, 0.0}), 0.0);
  CHECK_FALSE(f.theta.has_value());
}
