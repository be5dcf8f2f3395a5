#include "doctest.h"

#include <cmath>
#include <vector>

#include "cstirap/analysis.hpp"
#include "cstirap/scenarios.hpp"

using namespace cstirap;

namespace {

Trajectory synthetic(const std::vector<double>& t, const std::vector<std::vector<double>>& columns) {
  Trajectory tr;
  tr.times = t;
  tr.populations.resize(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (std::size_t i = 0; i < t.size(); ++i) tr.populations(i, c) = columns[c][i];
  tr.trace.assign(t.size(), 1.0);
  return tr;
}

ChainSystem constant_five(double a, double omega0, double d, double g1, double g2) {
  ChainSystem s;
  s.levels = {{"g1", LevelKind::ground, g1, 0}, {"e1", LevelKind::excited, 0, 0}, {"g2", LevelKind::ground, g2, 0},
              {"e2", LevelKind::excited, 0, 0}, {"g3", LevelKind::ground, 0, 0}};
  const double peaks[] = {a, omega0, omega0, d};
  for (std::size_t k = 0; k < 4; ++k) {
    Coupling c;
    c.lower_index = k;
    c.drive.peak_rabi = peaks[k];
    s.couplings.push_back(c);
  }
  s.target_level = 4;
  return validate_chain(std::move(s));
}

}  // namespace

TEST_CASE("efficiency is the final target population and detects saturation") {
  std::vector<double> t, rising, flat;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i * 0.1);
    rising.push_back(0.01 * i);
    flat.push_back(1.0 - std::exp(-static_cast<double>(i)));
  }
  const EfficiencyResult a = transfer_efficiency(synthetic(t, {rising}), 0);
  CHECK(a.value == doctest::Approx(1.0));
  CHECK_FALSE(a.saturated);
  const EfficiencyResult b = transfer_efficiency(synthetic(t, {flat}), 0);
  CHECK(b.saturated);
  CHECK_THROWS_AS((void)transfer_efficiency(synthetic(t, {flat}), 3), AnalysisError);
}

TEST_CASE("peak refinement recovers a sampled parabola exactly") {
  std::vector<double> t, p;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(i * 0.25);
    p.push_back(0.07 - 0.002 * (t.back() - 4.13) * (t.back() - 4.13));
  }
  const std::size_t level = 0;
  const auto peaks = peak_populations(synthetic(t, {p}), std::span<const std::size_t>(&level, 1));
  CHECK(peaks[0].t_peak == doctest::Approx(4.13));
  CHECK(peaks[0].p_peak == doctest::Approx(0.07));
}

TEST_CASE("decay rate limits") {
  CHECK(dark_decay_rate(0.0, 1e7, 1e8, 1e4, 6e4) == doctest::Approx(1e4));
  CHECK(dark_decay_rate(M_PI / 2, 1e7, 1e8, 1e4, 6e4) == doctest::Approx(0.0).scale(1.0));
  // At theta = pi/4: (G2 + G1/2) (Omega / 2 Omega0)^2 + G1/2
  const double expected = (6e4 + 0.5e4) * 0.05 * 0.05 + 0.5e4;
  CHECK(dark_decay_rate(M_PI / 4, 1e7, 1e8, 1e4, 6e4) == doctest::Approx(expected));
  CHECK_THROWS_AS((void)dark_decay_rate(0.3, 1e7, 0.0, 1e4, 6e4), AnalysisError);
}

TEST_CASE("survival under constant drive is a plain exponential") {
  const double a = 3e6, d = 4e6, g1 = 2e4, g2 = 5e4;
  const ChainSystem s = constant_five(a, 1e8, d, g1, g2);
  std::vector<double> t;
  for (int i = 0; i <= 50; ++i) t.push_back(i * 1e-7);
  const double rate = dark_decay_rate(std::atan2(a, d), 5e6, 1e8, g1, g2);
  CHECK(dark_survival_prediction(s, t) == doctest::Approx(std::exp(-rate * 5e-6)).epsilon(1e-12));
  const DarkDecayExponent e = dark_decay_exponent(s, t, g1, g2);
  CHECK(e.gamma2_part == doctest::Approx(g2 * 0.025 * 0.025 * std::pow(std::sin(2 * std::atan2(a, d)), 2) * 5e-6)
                              .epsilon(1e-9));
  CHECK(e.total() == doctest::Approx(rate * 5e-6));
}

TEST_CASE("decay prediction refuses other chain lengths") {
  const ScenarioPreset p = preset_rb2_seven_level();
  const std::vector<double> t = p.grid.times();
  CHECK_THROWS_AS((void)dark_survival_prediction(p.system, t), AnalysisError);
}

TEST_CASE("mixing angles run from 0 to pi/2 in counter-intuitive order") {
  const ScenarioPreset p = preset_five_level();
  const std::vector<double> t = p.grid.times();
  const std::vector<double> theta = mixing_angles(p.system, t);
  CHECK(theta.front() < 1e-3);
  CHECK(theta.back() > M_PI / 2 - 1e-3);
  for (std::size_t i = 1; i < theta.size(); ++i) CHECK(theta[i] >= theta[i - 1] - 1e-12);
}

TEST_CASE("adiabaticity metrics of the presets") {
  const ScenarioPreset p = preset_rb2_seven_level();
  const AdiabaticityMetrics m = adiabaticity_metrics(p.system, p.grid.t_start, p.grid.t_end);
  CHECK(m.adiabatic);
  CHECK(m.overlap_start < 0.0);
  CHECK(m.overlap_end > 0.0);
  CHECK(m.transfer_time == doctest::Approx(m.overlap_end - m.overlap_start));
  CHECK(m.omega_eff_t_tr > 100.0);
  CHECK(m.max_theta_dot_over_omega < 0.1);
}

TEST_CASE("pulses that never overlap raise") {
  ScenarioPreset p = preset_five_level();
  p.system.couplings[0].drive.delay = 40e-6;  // pump switches on long after the Stokes is gone
  p.system.couplings[3].drive.delay = 40e-6;
  CHECK_THROWS_AS((void)adiabaticity_metrics(p.system, -30e-6, -10e-6), AnalysisError);
}

TEST_CASE("report JSON carries the documented keys") {
  const ScenarioPreset p = preset_five_level();
  const SimulationResult r = simulate(p);
  const nlohmann::json j = to_json(r.report, p.system);
  for (const char* key : {"efficiency", "total_loss", "peak_populations", "adiabaticity", "integrator",
                          "final_populations", "max_intermediate_ground_peak", "predicted_dark_survival"})
    CHECK(j.contains(key));
  CHECK(j["peak_populations"].size() == 5);
  CHECK(j["total_loss"].get<double>() == doctest::Approx(1.0 - j["final_trace"].get<double>()));
  CHECK(j["efficiency"].get<double>() <= j["final_trace"].get<double>());
  CHECK(intermediate_ground_levels(p.system) == std::vector<std::size_t>{2});
}

TEST_CASE("lossless intermediate ground peak grows as xi squared") {
  std::vector<double> xis{0.05, 0.1, 0.2, 0.4}, peaks;
  for (double xi : xis) {
    FiveLevelParams p;
    p.xi = xi;
    p.gamma1 = p.gamma2 = 0.0;
    p.width = 1e-7 / xi;
    p.delay = -2.0 * p.width;
    const SimulationResult r = simulate(preset_five_level(p));
    peaks.push_back(r.report.max_intermediate_ground_peak);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xis.size(); ++i) {
    const double x = std::log(xis[i]), y = std::log(peaks[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(xis.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope >= 1.7);
  CHECK(slope <= 2.3);
}
