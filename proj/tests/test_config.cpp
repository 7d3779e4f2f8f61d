#include <doctest.h>

#include <string>

#include "watrack/config.hpp"

using namespace watrack;

TEST_CASE("a full scenario section parses into the right fields") {
    const std::string text = R"(# demo setup
[scenario lab]
data_rate = 1e9
duration = 2.5
seed = 42
tracking = off
rx_speed = 1.5
rx_range = 0.2
rx_turnaround = 0.05
noise_sigma = 0.3
camera_spot_sigma = 0.005
cycle_period = 0.007
substep = 1e-4
ctrl_alpha = 0.2
ctrl_p1 = 0.004
ctrl_q = 4
ctrl_ki = 25
packets_per_run = 50
symbols_per_packet = 20000
)";
    const ConfigFile cfg = parse_config(text);
    REQUIRE(cfg.scenarios.size() == 1);
    const ScenarioConfig& sc = cfg.scenarios[0];
    CHECK(sc.name == "lab");
    CHECK(sc.data_rate == 1e9);
    CHECK(sc.duration == 2.5);
    CHECK(sc.seed == 42);
    CHECK_FALSE(sc.tracking);
    CHECK(sc.rx_speed == 1.5);
    CHECK(sc.rx_turnaround == 0.05);
    CHECK(sc.noise_sigma == 0.3);
    CHECK(sc.camera_spot_sigma == 0.005);
    CHECK(sc.ctrl.alpha == 0.2);
    CHECK(sc.ctrl.p1 == 0.004);
    CHECK(sc.ctrl.q == 4.0);
    REQUIRE(sc.ctrl.k_i.has_value());
    CHECK(*sc.ctrl.k_i == 25.0);
    CHECK(sc.packets_per_run == 50);
    CHECK(sc.symbols_per_packet == 20000.0);
    CHECK_FALSE(sc.wave.has_value());
}

TEST_CASE("unknown keys are rejected with their line number") {
    const std::string text = "[scenario s]\ndata_rate = 1\nbogus_key = 3\n";
    try {
        parse_config(text);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
}

TEST_CASE("structural problems are caught") {
    CHECK_THROWS_AS(parse_config("data_rate = 1\n"), ConfigError);      // no section
    CHECK_THROWS_AS(parse_config("[mystery s]\n"), ConfigError);        // bad kind
    CHECK_THROWS_AS(parse_config("[scenario s\n"), ConfigError);        // unterminated
    CHECK_THROWS_AS(parse_config("[scenario s]\ndata_rate\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario s]\ndata_rate =\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario s]\ndata_rate = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario s]\ndata_rate = 1\ndata_rate = 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config("[scenario s]\ndata_rate = 1\n[scenario s]\ndata_rate = 2\n"),
        ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario s]\nduration = 5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario s]\ndata_rate = 1\ntracking = maybe\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario s]\ndata_rate = 1\nseed = -4\n"),
                    ConfigError);
}

TEST_CASE("wave sources are mutually exclusive") {
    CHECK_THROWS_AS(parse_config("[scenario s]\ndata_rate = 1\nwave_ascr = 0.1\n"
                                 "wave_amplitude = 0.2\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario s]\ndata_rate = 1\nwave_omega = 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario s]\ndata_rate = 1\nwave_shape = square\n"),
                    ConfigError);
}

TEST_CASE("explicit wave parameters attach to the scenario") {
    const ConfigFile cfg = parse_config(
        "[scenario s]\ndata_rate = 1\nwave_amplitude = 0.2\nwave_omega = 3\n"
        "wave_harmonic2 = 0.5\n");
    REQUIRE(cfg.scenarios[0].wave.has_value());
    CHECK(cfg.scenarios[0].wave->amplitude == 0.2);
    CHECK(cfg.scenarios[0].wave->omega == 3.0);
    CHECK(cfg.scenarios[0].wave->harmonic2 == 0.5);
}

TEST_CASE("a scenario can reference a named wave section") {
    const ConfigFile cfg = parse_config(
        "[wave swell]\namplitude = 0.15\nomega = 2.5\n\n"
        "[scenario s]\ndata_rate = 1\nwave = swell\n");
    REQUIRE(cfg.scenarios[0].wave.has_value());
    CHECK(cfg.scenarios[0].wave->amplitude == 0.15);
    CHECK(cfg.scenarios[0].wave->omega == 2.5);

    CHECK_THROWS_AS(parse_config("[scenario s]\ndata_rate = 1\nwave = missing\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("[wave w]\nomega = 2\n"), ConfigError);
}

TEST_CASE("sweep sections expand to the cartesian grid in order") {
    const ConfigFile cfg = parse_config(R"([sweep grid]
ascr = 0, 0.0963
rx_speed = 0.5, 1.0
data_rate = 1e8, 1e9
tracking = on, off
duration = 1.5
seed = 10
)");
    REQUIRE(cfg.sweeps.size() == 1);
    const SweepSpec& sp = cfg.sweeps[0];
    CHECK(sp.ascr.size() == 2);
    CHECK(sp.data_rate.size() == 2);
    CHECK(sp.base.duration == 1.5);

    // Expansion without calibration work: the zero rate rows carry no wave.
    SweepSpec nowave = sp;
    nowave.ascr = {0.0};
    const auto rows = expand_sweep(nowave);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].name == "grid_000");
    CHECK(rows[7].name == "grid_007");
    CHECK(rows[0].seed == 10);
    CHECK(rows[7].seed == 17);
    // Nesting: rx_speed is outermost here, tracking innermost.
    CHECK(rows[0].rx_speed == 0.5);
    CHECK(rows[0].data_rate == 1e8);
    CHECK(rows[0].tracking);
    CHECK_FALSE(rows[1].tracking);
    CHECK(rows[1].data_rate == 1e8);
    CHECK(rows[2].data_rate == 1e9);
    CHECK(rows[4].rx_speed == 1.0);
    for (const ScenarioConfig& r : rows) CHECK_FALSE(r.wave.has_value());
}

TEST_CASE("sweeps require data_rate") {
    CHECK_THROWS_AS(parse_config("[sweep s]\nrx_speed = 1\n"), ConfigError);
}

TEST_CASE("sweep expansion calibrates each wave rate once and shares it") {
    SweepSpec sp;
    sp.name = "w";
    sp.ascr = {0.0963, 0.0963};
    sp.rx_speed = {0.0};
    sp.data_rate = {1e9};
    sp.tracking = {true};
    const auto rows = expand_sweep(sp, Exec::Parallel);
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].wave.has_value());
    REQUIRE(rows[1].wave.has_value());
    CHECK(rows[0].wave->amplitude == rows[1].wave->amplitude);
    CHECK(rows[0].wave_ascr == 0.0963);
}

TEST_CASE("scenario wave targets resolve through calibration") {
    ScenarioConfig sc;
    sc.data_rate = 1e9;
    sc.wave_ascr = 0.0963;
    resolve_scenario_wave(sc, Exec::Parallel);
    REQUIRE(sc.wave.has_value());
    CHECK(sc.wave->amplitude > 0.0);
    CHECK(sc.wave->harmonic2 == 0.0);

    ScenarioConfig board;
    board.data_rate = 1e9;
    board.wave_ascr = 0.0963;
    board.wave_shape = "board";
    resolve_scenario_wave(board, Exec::Parallel);
    REQUIRE(board.wave.has_value());
    CHECK(board.wave->harmonic2 == 0.5);
}

TEST_CASE("calibration options map the named shapes") {
    CHECK(calibration_options_for_shape("sine").harmonic_ratio == 0.0);
    CHECK(calibration_options_for_shape("board").harmonic_ratio == 0.5);
    CHECK(calibration_options_for_shape("board").omega0 < 1.0);
    CHECK_THROWS_AS(calibration_options_for_shape("square"), std::invalid_argument);
}
