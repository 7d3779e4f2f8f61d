#include <doctest.h>

#include <cmath>
#include <vector>

#include "watrack/wave.hpp"

using namespace watrack;

namespace {

const GeometryConstants kGeom;
constexpr double kPi = 3.14159265358979323846;
constexpr double kTau220 = 1.0 / 220.0;

std::vector<SpotSample> synthesize(const WaveParams& p, int frames, double tau) {
    std::vector<SpotSample> out(frames);
    for (int i = 0; i < frames; ++i) {
        const double t = i * tau;
        const SlopeState s = sample_slope(p, t);
        out[i] = SpotSample{t, refract_displacement(s.gamma_x, kGeom),
                            refract_displacement(s.gamma_y, kGeom)};
    }
    return out;
}

}  // namespace

TEST_CASE("slope sampling follows the configured harmonics and axis split") {
    WaveParams p;
    p.amplitude = 0.2;
    p.omega = 3.0;
    p.phase = kPi / 2.0;
    SlopeState s = sample_slope(p, 0.0);
    CHECK(s.fy == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(s.fx == 0.0);

    p.axis_mix = 0.25;
    p.harmonic2 = 0.5;
    s = sample_slope(p, 0.0);
    // At phase pi/2 the second harmonic (sin of pi) vanishes.
    CHECK(s.fy == doctest::Approx(0.25 * 0.2).epsilon(1e-12));
    CHECK(s.fx == doctest::Approx(0.75 * 0.2).epsilon(1e-12));
    CHECK(std::tan(s.gamma_x) == doctest::Approx(s.fx).epsilon(1e-14));
}

TEST_CASE("peak slope scales with amplitude and grows with the 2nd harmonic") {
    WaveParams p;
    p.amplitude = 0.4;
    CHECK(wave_peak_slope(p) == doctest::Approx(0.4).epsilon(1e-7));
    p.harmonic2 = 0.5;
    // The two-harmonic profile peaks at ~1.299x the base amplitude.
    CHECK(wave_peak_slope(p) == doctest::Approx(0.4 * 1.299).epsilon(1e-3));
}

TEST_CASE("waves reaching the critical slope are rejected") {
    WaveParams p;
    p.amplitude = std::tan(critical_angle(kGeom)) * 1.01;
    CHECK_THROWS_AS(validate_wave(p, kGeom), std::invalid_argument);
    p.amplitude = std::tan(critical_angle(kGeom)) * 0.95;
    CHECK_NOTHROW(validate_wave(p, kGeom));
    p.axis_mix = 1.5;
    CHECK_THROWS_AS(validate_wave(p, kGeom), std::invalid_argument);
}

TEST_CASE("characterization requires uniform, increasing timestamps") {
    std::vector<SpotSample> s{{0.0, 0.0, 0.0}, {0.1, 0.0, 0.01}, {0.25, 0.0, 0.0}};
    CHECK_THROWS_AS(measure_ascr(s, kGeom), std::invalid_argument);
    s.pop_back();
    CHECK_NOTHROW(measure_ascr(s, kGeom));
    CHECK_THROWS_AS(measure_ascr({{0.0, 0.0, 0.0}}, kGeom), std::invalid_argument);
}

TEST_CASE("measured rate matches the closed form for a sinusoidal slope") {
    // Whole number of periods across the window so phase drops out:
    // mean |d/dt atan(A sin wt)| = (2/pi) * w * atan(A).
    const int frames = 10000;
    const double omega = 2.0 * kPi * 4.0 / ((frames - 1) * kTau220);
    WaveParams p;
    p.amplitude = 0.1;
    p.omega = omega;
    const double expected = 2.0 / kPi * omega * std::atan(p.amplitude);
    const AscrReport rep = measure_ascr(synthesize(p, frames, kTau220), kGeom);
    CHECK(rep.ascr == doctest::Approx(expected).epsilon(1e-5));

    SUBCASE("and is invariant to the wave phase") {
        for (double phase : {0.7, 1.9, 3.4}) {
            WaveParams q = p;
            q.phase = phase;
            const AscrReport r2 = measure_ascr(synthesize(q, frames, kTau220), kGeom);
            CHECK(r2.ascr == doctest::Approx(rep.ascr).epsilon(1e-6));
        }
    }
}

TEST_CASE("offset inversion gives identical results serial and parallel") {
    WaveParams p;
    p.amplitude = 0.35;
    p.omega = 4.0;
    p.axis_mix = 0.6;
    const auto samples = synthesize(p, 4000, kTau220);
    const auto a = invert_offsets(samples, kGeom, Exec::Serial);
    const auto b = invert_offsets(samples, kGeom, Exec::Parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].fx == b[i].fx);
        CHECK(a[i].fy == b[i].fy);
        CHECK(a[i].gamma_x == b[i].gamma_x);
        CHECK(a[i].gamma_y == b[i].gamma_y);
    }
}

TEST_CASE("calibration hits requested rates across the studied range") {
    for (double target : {0.0963, 0.2344, 0.5155}) {
        const CalibrationResult res = calibrate_wave(target, kGeom, {}, Exec::Parallel);
        CHECK(std::abs(res.achieved - target) <= 1e-3 * target);
        // Confirm by re-measuring the returned parameters from scratch.
        const AscrReport rep =
            measure_ascr(synthesize(res.params, 10000, kTau220), kGeom, Exec::Parallel);
        CHECK(rep.ascr == doctest::Approx(res.achieved).epsilon(1e-12));
    }
}

TEST_CASE("calibration is deterministic") {
    const CalibrationResult a = calibrate_wave(0.2344, kGeom, {}, Exec::Parallel);
    const CalibrationResult b = calibrate_wave(0.2344, kGeom, {}, Exec::Parallel);
    CHECK(a.params.amplitude == b.params.amplitude);
    CHECK(a.params.omega == b.params.omega);
    CHECK(a.achieved == b.achieved);
}

TEST_CASE("calibration handles the trivial and impossible targets") {
    const CalibrationResult zero = calibrate_wave(0.0, kGeom);
    CHECK(zero.params.amplitude == 0.0);
    CHECK(zero.achieved == 0.0);
    CHECK_THROWS_AS(calibrate_wave(-0.1, kGeom), CalibrationError);
    CHECK_THROWS_AS(calibrate_wave(10.0, kGeom, {}, Exec::Parallel), CalibrationError);
}

TEST_CASE("board-shaped wave at 0.5155 rad/s moves the spot fast") {
    // The two-harmonic family reproduces the measured tank behavior: a
    // large share of frame-to-frame spot speeds above 1 m/s. A single
    // sinusoid at the same rate cannot exceed ~0.9 m/s at any amplitude,
    // so the fast tail is the shape's signature (soft bound: >= 17%).
    CalibrationOptions board;
    board.omega0 = 0.9;
    board.harmonic_ratio = 0.5;
    const CalibrationResult res =
        calibrate_wave(0.5155, kGeom, board, Exec::Parallel);
    const AscrReport rep =
        measure_ascr(synthesize(res.params, 10000, kTau220), kGeom, Exec::Parallel);
    CHECK(rep.frac_speed_above_1 >= 0.17);

    CalibrationOptions sine;
    const CalibrationResult s = calibrate_wave(0.5155, kGeom, sine, Exec::Parallel);
    const AscrReport srep =
        measure_ascr(synthesize(s.params, 10000, kTau220), kGeom, Exec::Parallel);
    CHECK(srep.frac_speed_above_1 == 0.0);
}
