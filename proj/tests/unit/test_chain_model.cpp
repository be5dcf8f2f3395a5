#include "doctest.h"

#include <cmath>

#include "../oracles.hpp"
#include "cstirap/chain_model.hpp"

using namespace cstirap;

namespace {

ChainSystem three_level() {
  ChainSystem s;
  s.levels = {{"g1", LevelKind::ground, 0, 0}, {"e", LevelKind::excited, 0, 0}, {"g2", LevelKind::ground, 0, 0}};
  Coupling pump;
  pump.lower_index = 0;
  pump.drive = {PulseShape::tanh_on, 1e7, 1e-6, -2e-6, 0.0};
  Coupling stokes;
  stokes.lower_index = 1;
  stokes.drive = {PulseShape::tanh_off, 1e7, 1e-6, -2e-6, 0.0};
  s.couplings = {stokes, pump};
  s.initial_level = 0;
  s.target_level = 2;
  return s;
}

}  // namespace

TEST_CASE("validate_chain sorts couplings and accepts a valid chain") {
  const ChainSystem s = validate_chain(three_level());
  CHECK(s.couplings[0].lower_index == 0);
  CHECK(s.couplings[1].lower_index == 1);
  CHECK(s.size() == 3);
}

TEST_CASE("validate_chain rejects structural violations") {
  SUBCASE("even level count") {
    ChainSystem s = three_level();
    s.levels.push_back({"e2", LevelKind::excited, 0, 0});
    CHECK_THROWS_AS(validate_chain(s), ValidationError);
  }
  SUBCASE("wrong alternation") {
    ChainSystem s = three_level();
    s.levels[1].kind = LevelKind::ground;
    CHECK_THROWS_AS(validate_chain(s), ValidationError);
  }
  SUBCASE("negative loss") {
    ChainSystem s = three_level();
    s.levels[0].loss_rate = -1.0;
    CHECK_THROWS_AS(validate_chain(s), ValidationError);
  }
  SUBCASE("missing coupling") {
    ChainSystem s = three_level();
    s.couplings.pop_back();
    CHECK_THROWS_AS(validate_chain(s), ValidationError);
  }
  SUBCASE("target out of range") {
    ChainSystem s = three_level();
    s.target_level = 7;
    CHECK_THROWS_AS(validate_chain(s), ValidationError);
  }
  SUBCASE("zero width pulse") {
    ChainSystem s = three_level();
    s.couplings[0].drive.width = 0.0;
    CHECK_THROWS_AS(validate_chain(s), ValidationError);
  }
}

TEST_CASE("tanh envelopes switch at +-tau/2 and reach their peaks") {
  const PulseEnvelope on{PulseShape::tanh_on, 3e7, 1e-6, -2e-6, 0.0};
  const PulseEnvelope off{PulseShape::tanh_off, 3e7, 1e-6, -2e-6, 0.0};
  CHECK(envelope_eval(on, -1e-6) == doctest::Approx(1.5e7));
  CHECK(envelope_eval(off, 1e-6) == doctest::Approx(1.5e7));
  CHECK(envelope_eval(on, 1e-4) == doctest::Approx(3e7));
  CHECK(envelope_eval(off, -1e-4) == doctest::Approx(3e7));
  CHECK(envelope_eval(on, -1e-4) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("envelope derivative matches central differences") {
  for (PulseShape shape : {PulseShape::tanh_on, PulseShape::tanh_off, PulseShape::gaussian}) {
    const PulseEnvelope p{shape, 2e7, 1e-6, -1.5e-6, 0.3e-6};
    for (double t : {-3e-6, -0.7e-6, 0.0, 0.4e-6, 2e-6}) {
      const double h = 1e-10;
      const double fd = (envelope_eval(p, t + h) - envelope_eval(p, t - h)) / (2 * h);
      CHECK(envelope_derivative(p, t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("default window spans eight widths around the switching times") {
  const auto [t0, t1] = default_window(validate_chain(three_level()));
  CHECK(t0 == doctest::Approx(-9e-6));
  CHECK(t1 == doctest::Approx(9e-6));
}

TEST_CASE("grid times hit both ends exactly") {
  SimulationGrid g{-9e-6, 9e-6, 1801};
  const auto t = g.times();
  CHECK(t.size() == 1801);
  CHECK(t.front() == -9e-6);
  CHECK(t.back() == 9e-6);
  CHECK(t[900] == doctest::Approx(0.0).epsilon(1e-18));
  g.output_points = 1;
  CHECK_THROWS_AS(validate_grid(g), ValidationError);
}

TEST_CASE("intensity conversion agrees with the SI field relation") {
  for (double dipole : {0.4, 0.64, 2.37})
    for (double rabi : {1e6, 3e7, 1.2e8}) {
      CHECK(intensity_from_rabi(dipole, rabi) == doctest::Approx(oracle::intensity_w_cm2(rabi, dipole)).epsilon(1e-12));
      CHECK(rabi_from_intensity(dipole, intensity_from_rabi(dipole, rabi)) == doctest::Approx(rabi).epsilon(1e-12));
    }
}

TEST_CASE("collisional loss rate is k times n") {
  CHECK(collision_decay_rate(6e-10, 1e14) == doctest::Approx(6e4));
  CHECK_THROWS_AS((void)collision_decay_rate(-1.0, 1e14), ValidationError);
}
