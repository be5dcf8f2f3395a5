#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "cstirap/integrator.hpp"

using namespace cstirap;
using Complex = std::complex<double>;

TEST_CASE("complex exponential decay and rotation") {
  const Complex lambda(-0.3, 2.0);
  const OdeRhs rhs = [&](double, const ComplexVector& y, ComplexVector& dy) { dy = lambda * y; };
  ComplexVector y(1);
  y(0) = 1.0;
  std::vector<double> stops{0.5, 1.0, 2.0, 5.0};
  std::vector<Complex> seen;
  IntegratorOptions opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-13;
  const IntegratorStats stats =
      integrate_dopri5(rhs, y, 0.0, stops, [&](std::size_t, double, const ComplexVector& v) { seen.push_back(v(0)); }, opt);
  REQUIRE(seen.size() == stops.size());
  for (std::size_t i = 0; i < stops.size(); ++i) CHECK(std::abs(seen[i] - std::exp(lambda * stops[i])) < 1e-9);
  CHECK(stats.accepted > 0);
  CHECK(stats.rhs_evaluations >= 6 * stats.accepted);
}

TEST_CASE("error scales with tolerance at fifth order") {
  // harmonic oscillator y'' = -y as a first-order system
  const OdeRhs rhs = [](double, const ComplexVector& y, ComplexVector& dy) {
    dy(0) = y(1);
    dy(1) = -y(0);
  };
  auto run = [&](double tol) {
    ComplexVector y(2);
    y << 1.0, 0.0;
    IntegratorOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol;
    const std::vector<double> stops{20.0};
    integrate_dopri5(rhs, y, 0.0, stops, {}, opt);
    return std::abs(y(0) - std::cos(20.0));
  };
  const double coarse = run(1e-6), fine = run(1e-10);
  CHECK(fine < coarse);
  CHECK(fine < 1e-8);
}

TEST_CASE("backward integration") {
  const OdeRhs rhs = [](double t, const ComplexVector&, ComplexVector& dy) { dy(0) = 3.0 * t * t; };
  ComplexVector y(1);
  y(0) = 8.0;
  const std::vector<double> stops{1.0, 0.0};
  std::vector<double> values;
  integrate_dopri5(rhs, y, 2.0, stops, [&](std::size_t, double, const ComplexVector& v) { values.push_back(v(0).real()); },
                   IntegratorOptions{});
  CHECK(values[0] == doctest::Approx(1.0));
  CHECK(values[1] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("stops must be monotone") {
  const OdeRhs rhs = [](double, const ComplexVector& y, ComplexVector& dy) { dy = y; };
  ComplexVector y = ComplexVector::Ones(1);
  const std::vector<double> stops{1.0, 0.5};
  CHECK_THROWS_AS(integrate_dopri5(rhs, y, 0.0, stops, {}, IntegratorOptions{}), IntegrationError);
}

TEST_CASE("absurd tolerance underflows the step and raises") {
  const OdeRhs rhs = [](double, const ComplexVector& y, ComplexVector& dy) { dy = Complex(0, 1e3) * y; };
  ComplexVector y = ComplexVector::Ones(1);
  IntegratorOptions opt;
  opt.rel_tol = 1e-30;
  opt.abs_tol = 1e-300;
  const std::vector<double> stops{1.0};
  CHECK_THROWS_AS(integrate_dopri5(rhs, y, 0.0, stops, {}, opt), IntegrationError);
}

TEST_CASE("max_steps budget raises") {
  const OdeRhs rhs = [](double, const ComplexVector& y, ComplexVector& dy) { dy = Complex(0, 1e4) * y; };
  ComplexVector y = ComplexVector::Ones(1);
  IntegratorOptions opt;
  opt.max_steps = 10;
  const std::vector<double> stops{1.0};
  CHECK_THROWS_AS(integrate_dopri5(rhs, y, 0.0, stops, {}, opt), IntegrationError);
}

TEST_CASE("projection is applied after each accepted step") {
  const OdeRhs rhs = [](double, const ComplexVector& y, ComplexVector& dy) { dy = Complex(0.0, 1.0) * y; };
  ComplexVector y = ComplexVector::Ones(1);
  std::size_t calls = 0;
  const std::vector<double> stops{3.0};
  const IntegratorStats s = integrate_dopri5(rhs, y, 0.0, stops, {}, IntegratorOptions{},
                                             [&](double, ComplexVector& v) {
                                               ++calls;
                                               v /= std::abs(v(0));
                                             });
  CHECK(calls == s.accepted);
  CHECK(std::abs(y(0)) == doctest::Approx(1.0).epsilon(1e-14));
}
