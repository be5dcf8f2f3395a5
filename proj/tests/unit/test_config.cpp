#include "doctest.h"

#include <cmath>

#include "cstirap/config.hpp"

using namespace cstirap;
using nlohmann::json;

TEST_CASE("preset config with unit strings and overrides") {
  const json doc = json::parse(R"({"preset": "rb2-seven", "set": {"T": "2 us", "levels.0.loss_rate": "0 /s"},
                                   "output": {"dir": "out", "svg": true}})");
  const RunConfig cfg = load_run_config(doc, {parse_override("tau=-3 us"), parse_override("grid.output_points=501")});
  CHECK(get_parameter(cfg.scenario, "T") == doctest::Approx(2e-6));
  CHECK(get_parameter(cfg.scenario, "tau") == doctest::Approx(-3e-6));
  CHECK(cfg.scenario.system.levels[0].loss_rate == 0.0);
  CHECK(cfg.scenario.grid.output_points == 501);
  CHECK(cfg.scenario.auto_window);
  CHECK(cfg.scenario.grid.t_start == doctest::Approx(-1.5e-6 - 16e-6));
  CHECK(cfg.output_dir == "out");
  CHECK(cfg.emit_svg);
}

TEST_CASE("five-level factory parameters") {
  const RunConfig cfg = load_run_config(json::parse(R"({"preset": "five-level", "preset_parameters": {"xi": 0.05}})"),
                                        {parse_override("gamma=1e3"), parse_override("Gamma1=0")});
  CHECK(cfg.scenario.system.levels[1].loss_rate == 1e3);
  CHECK(cfg.scenario.system.levels[0].loss_rate == 0.0);
  CHECK(cfg.scenario.system.couplings[0].drive.peak_rabi == doctest::Approx(0.05 * 1e8 / std::sqrt(2.0)));
}

TEST_CASE("explicit grid window switches off the automatic window") {
  const RunConfig cfg =
      load_run_config(json::parse(R"({"preset": "five-level", "grid": {"t_start": "-4 us", "t_end": "4 us"}})"),
                      {parse_override("T=2 us")});
  CHECK_FALSE(cfg.scenario.auto_window);
  CHECK(cfg.scenario.grid.t_start == doctest::Approx(-4e-6));
}

TEST_CASE("inline system with an intensity-specified peak") {
  const json doc = json::parse(R"({"system": {
      "levels": [{"label": "a", "kind": "ground"}, {"label": "b", "kind": "excited", "loss_rate": "1e6 /s"},
                 {"label": "c", "kind": "ground"}],
      "couplings": [{"dipole": "0.4 D", "drive": {"shape": "tanh_on", "peak": "3 W/cm2", "width": "1 us", "delay": "-2 us"}},
                    {"dipole": {"value": 2.37, "unit": "D"}, "drive": {"shape": "tanh_off", "peak": "3e7 /s", "width": "1 us", "delay": "-2 us"}}]
    }})");
  const RunConfig cfg = load_run_config(doc);
  CHECK(cfg.scenario.name == "custom");
  CHECK(cfg.scenario.system.couplings[0].drive.peak_rabi == doctest::Approx(rabi_from_intensity(0.4, 3.0)));
  CHECK(cfg.scenario.system.couplings[1].dipole_moment == doctest::Approx(2.37));
  CHECK(cfg.scenario.system.target_level == 2);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS((void)load_run_config(json::parse(R"({})")), ValidationError);
  CHECK_THROWS_AS((void)load_run_config(json::parse(R"({"preset": "rb2-seven", "system": {}})")), ValidationError);
  CHECK_THROWS_AS((void)load_run_config(json::parse(R"({"preset": "rb2-seven", "colour": 1})")), ValidationError);
  CHECK_THROWS_AS((void)load_run_config(json::parse(R"({"preset": "rb2-seven"})"), {parse_override("bogus=1")}),
                  ValidationError);
  CHECK_THROWS_AS((void)load_run_config(json::parse(R"({"preset": "rb2-seven"})"), {parse_override("levels.9.loss_rate=1")}),
                  ValidationError);
  CHECK_THROWS_AS((void)load_run_config(json::parse(R"({"preset": "rb2-seven"})"), {parse_override("T=3 D")}),
                  ValidationError);
  CHECK_THROWS_AS((void)load_run_config(json::parse(R"({"preset": "rb2-seven", "grid": {"output_points": 1}})")),
                  ValidationError);
  CHECK_THROWS_AS((void)parse_override("novalue"), ValidationError);
}

TEST_CASE("preset export round-trips through the config schema") {
  for (const char* name : {"five-level", "rb2-seven"}) {
    const ScenarioPreset p = preset_by_name(name);
    const RunConfig cfg = load_run_config(preset_to_config(p));
    const ChainSystem& a = p.system;
    const ChainSystem& b = cfg.scenario.system;
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a.levels[k].label == b.levels[k].label);
      CHECK(a.levels[k].loss_rate == b.levels[k].loss_rate);
    }
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
      CHECK(a.couplings[k].drive.peak_rabi == b.couplings[k].drive.peak_rabi);
      CHECK(a.couplings[k].drive.delay == b.couplings[k].drive.delay);
      CHECK(a.couplings[k].dipole_moment == b.couplings[k].dipole_moment);
      CHECK(a.couplings[k].wavelength == b.couplings[k].wavelength);
    }
    CHECK(cfg.scenario.grid.t_start == p.grid.t_start);
    CHECK(cfg.scenario.grid.output_points == p.grid.output_points);
  }
}

TEST_CASE("sweep and optimize sections") {
  const RunConfig cfg = load_run_config(json::parse(R"({"preset": "rb2-seven",
      "sweep": {"axes": [{"parameter": "T", "values": ["0.5 us", 1e-6]}], "workers": 2},
      "optimize": {"parameters": [{"name": "omega0", "start": "1e8 /s", "lower": "1e7 /s", "upper": "2e8 /s"}],
                   "max_evaluations": 0, "rabi_cap": "5e7 /s"},
      "analyze": {"times": ["0 us"]}})"));
  REQUIRE(cfg.sweep);
  CHECK(cfg.sweep->axes[0].values == std::vector<double>{0.5e-6, 1e-6});
  CHECK(cfg.sweep->workers == 2);
  REQUIRE(cfg.optimize);
  CHECK(cfg.optimize->max_evaluations == 0);
  CHECK(*cfg.optimize->rabi_cap == 5e7);
  CHECK(cfg.analyze_times == std::vector<double>{0.0});
}
