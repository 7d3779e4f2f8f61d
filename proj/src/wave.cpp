#include "watrack/wave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace watrack {

SlopeState sample_slope(const WaveParams& p, double t) {
    const double th = p.omega * t + p.phase;
    const double f = p.amplitude * (std::sin(th) + p.harmonic2 * std::sin(2.0 * th));
    return slopes_from_gradient((1.0 - p.axis_mix) * f, p.axis_mix * f);
}

double wave_peak_slope(const WaveParams& p) {
    // The combined waveform's extremum has no closed form for harmonic2 > 0;
    // a dense scan over one cycle is exact to ~1e-8 of the peak.
    double peak = 0.0;
    constexpr int kSteps = 20001;
    for (int i = 0; i < kSteps; ++i) {
        const double th = 2.0 * 3.14159265358979323846 * i / (kSteps - 1);
        const double f = std::sin(th) + p.harmonic2 * std::sin(2.0 * th);
        peak = std::max(peak, std::abs(f));
    }
    return p.amplitude * peak * std::max(p.axis_mix, 1.0 - p.axis_mix);
}

void validate_wave(const WaveParams& p, const GeometryConstants& c) {
    if (p.amplitude < 0.0) throw std::invalid_argument("wave amplitude must be >= 0");
    if (p.omega <= 0.0) throw std::invalid_argument("wave omega must be > 0");
    if (p.axis_mix < 0.0 || p.axis_mix > 1.0)
        throw std::invalid_argument("wave axis_mix must be in [0,1]");
    if (p.harmonic2 < 0.0) throw std::invalid_argument("wave harmonic2 must be >= 0");
    const double limit = std::tan(critical_angle(c));
    if (wave_peak_slope(p) >= limit)
        throw std::invalid_argument(
            "wave peak slope " + std::to_string(wave_peak_slope(p)) +
            " reaches the critical slope " + std::to_string(limit));
}

std::vector<SlopeState> invert_offsets(const std::vector<SpotSample>& samples,
                                       const GeometryConstants& c, Exec exec) {
    std::vector<SlopeState> out(samples.size());
    parallel_for(exec, samples.size(), [&](std::size_t i) {
        out[i] = slopes_from_offset(samples[i].x, samples[i].y, c);
    });
    return out;
}

AscrReport measure_ascr(const std::vector<SpotSample>& samples,
                        const GeometryConstants& c, Exec exec) {
    if (samples.size() < 2)
        throw std::invalid_argument("characterization needs at least 2 samples");
    const double tau = samples[1].t - samples[0].t;
    if (tau <= 0.0) throw std::invalid_argument("sample times must increase");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (std::abs(samples[i].t - samples[i - 1].t - tau) > 1e-9)
            throw std::invalid_argument("sample times must be uniformly spaced");
    }

    const std::vector<SlopeState> slopes = invert_offsets(samples, c, exec);

    AscrReport rep;
    rep.scr.resize(samples.size() - 1);
    std::size_t above1 = 0, above2 = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const Normal a = surface_normal(slopes[i].fx, slopes[i].fy);
        const Normal b = surface_normal(slopes[i + 1].fx, slopes[i + 1].fy);
        const double rate = slope_change(a, b) / tau;
        rep.scr[i] = rate;
        sum += rate;
        rep.peak_scr = std::max(rep.peak_scr, rate);
        const double dx = samples[i + 1].x - samples[i].x;
        const double dy = samples[i + 1].y - samples[i].y;
        const double speed = std::sqrt(dx * dx + dy * dy) / tau;
        if (speed > 1.0) ++above1;
        if (speed > 2.0) ++above2;
    }
    rep.ascr = sum / static_cast<double>(rep.scr.size());
    rep.frac_speed_above_1 = static_cast<double>(above1) / rep.scr.size();
    rep.frac_speed_above_2 = static_cast<double>(above2) / rep.scr.size();
    return rep;
}

namespace {

// Measured rate for a candidate wave: synthesize frame-rate offsets through
// the forward displacement map, then characterize them the same way the
// production path does (inversion included, so the round trip is exercised).
double measured_rate(const WaveParams& p, const GeometryConstants& c,
                     const CalibrationOptions& o, Exec exec) {
    std::vector<SpotSample> samples(static_cast<std::size_t>(o.frames));
    const double tau = 1.0 / o.fps;
    for (int i = 0; i < o.frames; ++i) {
        const double t = i * tau;
        const SlopeState s = sample_slope(p, t);
        samples[i] = SpotSample{t, refract_displacement(s.gamma_x, c),
                                refract_displacement(s.gamma_y, c)};
    }
    return measure_ascr(samples, c, exec).ascr;
}

}  // namespace

CalibrationResult calibrate_wave(double target_ascr, const GeometryConstants& c,
                                 const CalibrationOptions& opts, Exec exec) {
    if (target_ascr < 0.0)
        throw CalibrationError("target rate must be >= 0");

    WaveParams p;
    p.omega = opts.omega0;
    p.phase = opts.phase;
    p.axis_mix = opts.axis_mix;
    p.harmonic2 = opts.harmonic_ratio;

    if (target_ascr == 0.0) {
        p.amplitude = 0.0;
        return CalibrationResult{p, 0.0};
    }

    // Amplitude ceiling: the full waveform must stay below the critical
    // slope, so normalize by the shape's peak (1 for a pure sinusoid).
    WaveParams shape = p;
    shape.amplitude = 1.0;
    const double ceiling =
        opts.amplitude_margin * std::tan(critical_angle(c)) / wave_peak_slope(shape);

    double omega = opts.omega0;
    for (int round = 0; round < 12; ++round) {
        p.omega = omega;
        p.amplitude = ceiling;
        const double max_rate = measured_rate(p, c, opts, exec);
        if (max_rate < target_ascr) {
            if (omega >= opts.omega_max)
                throw CalibrationError(
                    "target rate " + std::to_string(target_ascr) +
                    " rad/s is unreachable: ceiling " + std::to_string(max_rate) +
                    " rad/s at omega_max");
            // The rate is nearly linear in omega; step toward the target.
            omega = std::min(omega * target_ascr / max_rate * 1.0001, opts.omega_max);
            continue;
        }
        double lo = 0.0, hi = ceiling;
        for (int it = 0; it < 62; ++it) {
            p.amplitude = 0.5 * (lo + hi);
            (measured_rate(p, c, opts, exec) < target_ascr ? lo : hi) = p.amplitude;
        }
        p.amplitude = 0.5 * (lo + hi);
        const double achieved = measured_rate(p, c, opts, exec);
        if (std::abs(achieved - target_ascr) <= opts.rel_tol * target_ascr)
            return CalibrationResult{p, achieved};
        throw CalibrationError("calibration converged outside tolerance: achieved " +
                               std::to_string(achieved));
    }
    throw CalibrationError("calibration did not converge");
}

}  // namespace watrack
