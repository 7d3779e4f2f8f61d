// Run-configuration files: an INI dialect with [scenario <name>],
// [sweep <name>], and [wave <name>] sections. Parsing is strict — unknown
// keys, duplicate keys or sections, and malformed values are errors that
// name the offending line.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "watrack/engine.hpp"
#include "watrack/parallel.hpp"
#include "watrack/wave.hpp"

namespace watrack {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& msg, int line_no);
    int line;
};

// A grid of scenario variations sharing one base configuration. Rows are
// the cartesian product ascr x rx_speed x data_rate x tracking, in that
// nesting order.
struct SweepSpec {
    std::string name = "sweep";
    std::vector<double> ascr{0.0};        // 0 entries mean "no wave"
    std::vector<double> rx_speed{0.0};
    std::vector<double> data_rate;        // required
    std::vector<bool> tracking{true};
    ScenarioConfig base;
};

struct ConfigFile {
    std::vector<ScenarioConfig> scenarios;
    std::vector<SweepSpec> sweeps;
    std::vector<std::pair<std::string, WaveParams>> waves;
};

ConfigFile parse_config(const std::string& text);
ConfigFile load_config_file(const std::string& path);

// Calibration starting points for the named wave family: "sine" is a single
// sinusoid; "board" adds a second harmonic at half amplitude (a wavemaker
// board profile) and starts slow enough to keep its long swells.
CalibrationOptions calibration_options_for_shape(const std::string& shape);

// Fill sc.wave by calibrating to sc.wave_ascr when a target is configured
// and no explicit parameters were given.
void resolve_scenario_wave(ScenarioConfig& sc, Exec exec = Exec::Serial);

// Materialize sweep rows: resolve waves (each distinct rate calibrated
// once), set per-row names "<sweep>_NNN" and seeds base.seed + row index.
std::vector<ScenarioConfig> expand_sweep(const SweepSpec& spec,
                                         Exec exec = Exec::Serial);

}  // namespace watrack
