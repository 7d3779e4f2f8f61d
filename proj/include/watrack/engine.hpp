// Closed-loop scenario engine: a receiver carriage shuttling on a rail, a
// dynamic surface, the feedback camera, the adaptive controller and mirror,
// and the link evaluated along the way. Time advances on a fixed substep;
// captures, commands, and mirror motion happen at their scheduled offsets
// inside each control cycle.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "watrack/control.hpp"
#include "watrack/geometry.hpp"
#include "watrack/imaging.hpp"
#include "watrack/link.hpp"
#include "watrack/parallel.hpp"
#include "watrack/wave.hpp"

namespace watrack {

// Rail motion: the carriage starts at rest at `start`, accelerates to the
// cruise speed over half a turnaround, then shuttles across the full range
// with trapezoidal velocity (linear ramps of `turnaround` seconds at each
// end, placed so the carriage peaks exactly at +/- range/2).
class ReceiverTrajectory {
  public:
    ReceiverTrajectory(double speed, double range, double turnaround, double start);

    double position(double t) const;
    double velocity(double t) const;

  private:
    double v_ = 0.0, range_ = 0.0, turn_ = 0.0, start_ = 0.0;
    double cruise0_ = 0.0;   // first up-cruise duration after the startup ramp
    double cruise_ = 0.0;    // steady cruise duration between ramps
    double period_ = 0.0;    // steady-state period
    double x_top_ = 0.0, x_bot_ = 0.0;  // positions entering the ramps
};

struct ControlOverrides {
    double alpha = 0.1;
    double p1 = 0.005;
    double p2 = 0.010;
    double q = 3.0;
    std::optional<double> k_i;   // defaults to 0.8 * k / cycle_period
    double k_d = 0.0;
    double integ_max = 0.1;
};

struct ScenarioConfig {
    std::string name = "scenario";
    double data_rate = 0.0;         // [bit/s], required
    double duration = 10.0;         // [s]
    std::uint64_t seed = 0;
    bool tracking = true;

    double rx_speed = 0.0;          // [m/s]
    double rx_range = 0.2;          // rail span [m]
    double rx_turnaround = 0.06;    // velocity-ramp duration [s]
    double rx_start = 0.0;          // initial carriage position [m]

    std::optional<WaveParams> wave;
    double wave_ascr = 0.0;         // characterization rate metadata [rad/s]
    std::string wave_shape = "sine";  // calibration family for wave_ascr

    double noise_sigma = 0.0;       // camera noise [counts]
    double camera_spot_sigma = 0.006;
    double camera_peak = 200.0;

    double cycle_period = 0.007;    // control cycle [s]
    double substep = 1e-4;          // simulation step [s]
    double capture_offset = 0.0005; // capture time within the cycle [s]
    double processing_latency = 0.0015;  // capture-to-command delay [s]

    ControlOverrides ctrl;
    std::size_t packets_per_run = 100;
    double symbols_per_packet = 10000.0;

    GeometryConstants geom;
    LinkConfig link;

    std::string frames_dir;         // when set, dump each capture as PGM
};

// Throws std::invalid_argument describing the first offending field.
void validate_scenario(const ScenarioConfig& sc);

struct CycleRecord {
    double t = 0.0;                 // capture time
    double offset_x = 0.0, offset_y = 0.0;  // true spot-receiver offset [m]
    bool located = false;
    double meas_x = 0.0, meas_y = 0.0;      // pipeline measurement [m]
    double tilt_x = 0.0, tilt_y = 0.0;      // commanded mirror target [rad]
    double s_x = 1.0, s_y = 1.0;            // adaptive gain scales
};

struct RunResult {
    RunMetrics metrics;
    std::vector<CycleRecord> cycles;
    std::vector<double> offsets_x, offsets_y;  // one sample per substep
    double frac_offset_above_edge = 0.0;  // time share with |offset| beyond
                                          // the FEC-edge radius
    WaveParams wave;                      // wave actually simulated
};

RunResult run_scenario(const ScenarioConfig& sc);

struct SweepRow {
    ScenarioConfig config;
    std::optional<RunMetrics> metrics;  // empty when the row failed
    double frac_offset_above_edge = 0.0;
    std::string error;
};

// Run independent scenario rows; each row is isolated, failures are
// captured per row. Rows parallelize under Exec::Parallel with results
// stored by index.
std::vector<SweepRow> run_sweep(const std::vector<ScenarioConfig>& rows,
                                Exec exec = Exec::Serial);

}  // namespace watrack
