// Dynamic-surface model and its characterization: a one- or two-harmonic
// slope waveform, batch inversion of observed spot offsets back to slopes,
// the average slope-change-rate statistic over a frame sequence, and a
// calibration routine that finds wave parameters hitting a requested rate.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "watrack/geometry.hpp"
#include "watrack/parallel.hpp"

namespace watrack {

// Height-field gradient along the principal axis:
//   f(t) = amplitude * (sin(omega t + phase) + harmonic2 * sin(2(omega t + phase)))
// split between the two axes by axis_mix (1 = all on y, 0 = all on x).
struct WaveParams {
    double amplitude = 0.0;      // peak slope of the first harmonic [rise/run]
    double omega = 4.0;          // angular rate [rad/s]
    double phase = 0.0;          // [rad]
    double axis_mix = 1.0;       // share of the slope on the y axis, in [0,1]
    double harmonic2 = 0.0;      // second-harmonic slope ratio, >= 0
};

SlopeState sample_slope(const WaveParams& p, double t);

// Largest |f(t)| over a cycle of the combined waveform (either axis share).
double wave_peak_slope(const WaveParams& p);

// Throws std::invalid_argument if the waveform can reach the critical slope
// (the beam would stop refracting) or any parameter is out of range.
void validate_wave(const WaveParams& p, const GeometryConstants& c);

// One camera-rate observation of the spot on the receiver plane.
struct SpotSample {
    double t = 0.0;
    double x = 0.0, y = 0.0;     // spot offset from the optical axis [m]
};

// Recover per-frame surface slopes from observed offsets (batch inverse of
// the displacement map). Element-independent; parallel under Exec::Parallel.
std::vector<SlopeState> invert_offsets(const std::vector<SpotSample>& samples,
                                       const GeometryConstants& c,
                                       Exec exec = Exec::Serial);

struct AscrReport {
    double ascr = 0.0;                // mean |slope change| / frame gap [rad/s]
    double peak_scr = 0.0;            // largest single-interval rate [rad/s]
    double frac_speed_above_1 = 0.0;  // share of spot speeds > 1 m/s
    double frac_speed_above_2 = 0.0;  // share of spot speeds > 2 m/s
    std::vector<double> scr;          // per-interval rates, size n-1
};

// Characterize a uniformly sampled offset sequence: invert to slopes, form
// surface normals, and average the angular change rate between consecutive
// frames. Requires >= 2 samples with a uniform time step (1 ns tolerance).
AscrReport measure_ascr(const std::vector<SpotSample>& samples,
                        const GeometryConstants& c,
                        Exec exec = Exec::Serial);

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CalibrationOptions {
    double omega0 = 4.0;          // starting angular rate [rad/s]
    double harmonic_ratio = 0.0;  // 0 = single sinusoid; 0.5 = board-like
    double axis_mix = 1.0;
    double phase = 0.0;
    double fps = 220.0;           // characterization frame rate
    int frames = 10000;           // characterization length
    double omega_max = 4.0 * 3.14159265358979323846;
    double amplitude_margin = 0.98;  // fraction of the critical slope usable
    double rel_tol = 1e-3;           // relative tolerance on the achieved rate
};

struct CalibrationResult {
    WaveParams params;
    double achieved = 0.0;        // measured rate for params [rad/s]
};

// Find wave parameters whose measured average slope-change rate equals
// target_ascr: bisect the amplitude at fixed omega (the rate is monotone in
// amplitude), raising omega when the amplitude ceiling cannot reach the
// target. Throws CalibrationError when no parameters reach it.
CalibrationResult calibrate_wave(double target_ascr,
                                 const GeometryConstants& c,
                                 const CalibrationOptions& opts = {},
                                 Exec exec = Exec::Serial);

}  // namespace watrack
