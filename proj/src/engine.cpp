#include "watrack/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace watrack {

ReceiverTrajectory::ReceiverTrajectory(double speed, double range,
                                       double turnaround, double start)
    : v_(speed), range_(range), turn_(turnaround), start_(start) {
    if (range <= 0.0) throw std::invalid_argument("rx_range must be > 0");
    if (speed < 0.0) throw std::invalid_argument("rx_speed must be >= 0");
    if (turnaround < 0.0) throw std::invalid_argument("rx_turnaround must be >= 0");
    if (speed == 0.0) {
        if (std::abs(start) > 0.5 * range)
            throw std::invalid_argument("rx_start must lie on the rail");
        return;
    }
    if (start != 0.0)
        throw std::invalid_argument("rx_start must be 0 when rx_speed > 0");
    if (turnaround > range / speed)
        throw std::invalid_argument("rx_turnaround too long for the rail span");
    cruise0_ = 0.5 * range / speed - 0.5 * turnaround;
    cruise_ = range / speed - 0.5 * turnaround;
    period_ = 2.0 * (cruise_ + turnaround);
    x_top_ = 0.5 * range - 0.25 * speed * turnaround;
    x_bot_ = -x_top_;
}

double ReceiverTrajectory::position(double t) const {
    if (t < 0.0) throw std::invalid_argument("trajectory time must be >= 0");
    if (v_ == 0.0) return start_;
    // Startup: rest to cruise speed over half a ramp.
    if (t < 0.5 * turn_) return v_ / turn_ * t * t;
    double tp = t - 0.5 * turn_;
    const double x_up0 = 0.25 * v_ * turn_;
    if (tp < cruise0_) return x_up0 + v_ * tp;
    double tau = std::fmod(tp - cruise0_, period_);
    if (tau < turn_)  // ramp at the top end
        return x_top_ + v_ * tau - v_ * tau * tau / turn_;
    tau -= turn_;
    if (tau < cruise_) return x_top_ - v_ * tau;
    tau -= cruise_;
    if (tau < turn_)  // ramp at the bottom end
        return x_bot_ - v_ * tau + v_ * tau * tau / turn_;
    tau -= turn_;
    return x_bot_ + v_ * tau;
}

double ReceiverTrajectory::velocity(double t) const {
    if (t < 0.0) throw std::invalid_argument("trajectory time must be >= 0");
    if (v_ == 0.0) return 0.0;
    if (t < 0.5 * turn_) return 2.0 * v_ / turn_ * t;
    double tp = t - 0.5 * turn_;
    if (tp < cruise0_) return v_;
    double tau = std::fmod(tp - cruise0_, period_);
    if (tau < turn_) return v_ * (1.0 - 2.0 * tau / turn_);
    tau -= turn_;
    if (tau < cruise_) return -v_;
    tau -= cruise_;
    if (tau < turn_) return -v_ * (1.0 - 2.0 * tau / turn_);
    return v_;
}

void validate_scenario(const ScenarioConfig& sc) {
    if (sc.data_rate <= 0.0) throw std::invalid_argument("data_rate must be > 0");
    if (sc.duration <= 0.0) throw std::invalid_argument("duration must be > 0");
    if (sc.substep <= 0.0) throw std::invalid_argument("substep must be > 0");
    if (sc.cycle_period <= 0.0) throw std::invalid_argument("cycle_period must be > 0");
    const double cyc = sc.cycle_period / sc.substep;
    if (std::abs(cyc - std::round(cyc)) > 1e-9)
        throw std::invalid_argument("cycle_period must be a multiple of substep");
    if (sc.capture_offset < 0.0 || sc.capture_offset >= sc.cycle_period)
        throw std::invalid_argument("capture_offset must lie inside the cycle");
    if (sc.processing_latency < 0.0)
        throw std::invalid_argument("processing_latency must be >= 0");
    if (sc.noise_sigma < 0.0) throw std::invalid_argument("noise_sigma must be >= 0");
    if (sc.camera_spot_sigma <= 0.0)
        throw std::invalid_argument("camera_spot_sigma must be > 0");
    if (sc.camera_peak <= 0.0) throw std::invalid_argument("camera_peak must be > 0");
    if (sc.packets_per_run < 1)
        throw std::invalid_argument("packets_per_run must be >= 1");
    if (sc.symbols_per_packet <= 0.0)
        throw std::invalid_argument("symbols_per_packet must be > 0");
    const double nsub = sc.duration / sc.substep;
    if (nsub < static_cast<double>(sc.packets_per_run))
        throw std::invalid_argument("duration too short for the packet count");
    if (sc.ctrl.alpha <= 0.0) throw std::invalid_argument("ctrl alpha must be > 0");
    if (sc.ctrl.p1 < 0.0 || sc.ctrl.p2 < 0.0)
        throw std::invalid_argument("ctrl thresholds must be >= 0");
    if (sc.ctrl.q < 1.0) throw std::invalid_argument("ctrl q must be >= 1");
    if (sc.ctrl.k_d < 0.0) throw std::invalid_argument("ctrl k_d must be >= 0");
    if (sc.ctrl.integ_max <= 0.0)
        throw std::invalid_argument("ctrl integ_max must be > 0");
    if (sc.ctrl.k_i && *sc.ctrl.k_i < 0.0)
        throw std::invalid_argument("ctrl k_i must be >= 0");
    if (sc.wave) validate_wave(*sc.wave, sc.geom);
    // Trajectory constraints are enforced by its constructor.
    ReceiverTrajectory probe(sc.rx_speed, sc.rx_range, sc.rx_turnaround, sc.rx_start);
    (void)probe;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& sc) {
    validate_scenario(sc);

    const ReceiverTrajectory rx(sc.rx_speed, sc.rx_range, sc.rx_turnaround,
                                sc.rx_start);
    const LinkModel link(sc.link);

    ControllerTuning tuning;
    tuning.k = 1.0 / (2.0 * sc.geom.lever);
    tuning.alpha = sc.ctrl.alpha;
    tuning.p1 = sc.ctrl.p1;
    tuning.p2 = sc.ctrl.p2;
    tuning.q = sc.ctrl.q;
    tuning.k_i = sc.ctrl.k_i ? *sc.ctrl.k_i : 0.8 * tuning.k / sc.cycle_period;
    tuning.k_d = sc.ctrl.k_d;
    tuning.integ_max = sc.ctrl.integ_max;
    AxisControllerState ax_x{tuning}, ax_y{tuning};
    MirrorState mirror;

    RenderConfig cam;
    cam.peak = sc.camera_peak;
    cam.sigma = sc.camera_spot_sigma;
    cam.noise_sigma = sc.noise_sigma;
    PipelineConfig pipe;

    if (!sc.frames_dir.empty())
        std::filesystem::create_directories(sc.frames_dir);

    const auto nsub = static_cast<std::size_t>(std::llround(sc.duration / sc.substep));
    const auto cyc = static_cast<std::size_t>(std::llround(sc.cycle_period / sc.substep));
    const auto cap_idx =
        static_cast<std::size_t>(std::llround(sc.capture_offset / sc.substep)) % cyc;

    std::vector<ChannelSample> channel(nsub);
    std::vector<double> off_x(nsub), off_y(nsub);
    RunResult result;
    result.wave = sc.wave.value_or(WaveParams{0.0, 4.0, 0.0, 1.0, 0.0});
    result.cycles.reserve(nsub / cyc + 1);

    double prev_r = 0.0;
    std::size_t above_edge = 0, cycle_count = 0;
    for (std::size_t j = 0; j < nsub; ++j) {
        const double t = static_cast<double>(j) * sc.substep;
        mirror_advance(mirror, t);

        const SlopeState slope =
            sc.wave ? sample_slope(*sc.wave, t) : SlopeState{};
        const double rx_x = rx.position(t);

        bool outage = false;
        double ox = 0.0, oy = 0.0, r = prev_r;
        try {
            const PlanePoint spot =
                beam_to_plane(mirror.tilt_x, mirror.tilt_y, slope, sc.geom);
            ox = spot.x - rx_x;
            oy = spot.y;
            r = std::hypot(ox, oy);
        } catch (const TotalInternalReflection&) {
            outage = true;  // no refracted beam; hold the last radial offset
        }
        channel[j] = ChannelSample{t, r, outage};
        off_x[j] = ox;
        off_y[j] = oy;
        prev_r = r;
        if (r > sc.link.fec_edge_offset || outage) ++above_edge;

        if (j % cyc != cap_idx) continue;

        // Capture: the feedback camera frames the receiver plane, so the
        // spot appears at its offset from the carriage.
        CycleRecord rec;
        rec.t = t;
        rec.offset_x = ox;
        rec.offset_y = oy;
        rec.tilt_x = mirror.pending ? mirror.pending_x : mirror.tilt_x;
        rec.tilt_y = mirror.pending ? mirror.pending_y : mirror.tilt_y;
        rec.s_x = ax_x.s;
        rec.s_y = ax_y.s;

        std::optional<SpotLocation> loc;
        if (!outage) {
            const std::uint64_t frame_seed =
                splitmix64(sc.seed + 0x9E3779B97F4A7C15ULL * (cycle_count + 1));
            const Frame frame = render_frame(cam, ox, oy, frame_seed);
            if (!sc.frames_dir.empty()) {
                char name[32];
                std::snprintf(name, sizeof name, "frame_%06zu.pgm", cycle_count);
                write_pgm(frame, sc.frames_dir + "/" + name, true);
            }
            loc = locate_spot(frame, pipe);
        }
        ++cycle_count;

        if (loc) {
            rec.located = true;
            rec.meas_x = loc->x;
            rec.meas_y = loc->y;
        }
        // A cycle with no detectable spot leaves the controller untouched:
        // no gain adaptation, no integral update, no new command.
        if (sc.tracking && loc) {
            adapt_gain(ax_x, loc->x, 0.0);
            adapt_gain(ax_y, loc->y, 0.0);
            const double dx = pid_command(ax_x, loc->x, sc.cycle_period);
            const double dy = pid_command(ax_y, loc->y, sc.cycle_period);
            command_mirror(mirror, mirror.tilt_x + dx, mirror.tilt_y + dy,
                           t + sc.processing_latency);
            rec.tilt_x = mirror.pending_x;
            rec.tilt_y = mirror.pending_y;
            rec.s_x = ax_x.s;
            rec.s_y = ax_y.s;
        }
        result.cycles.push_back(rec);
    }

    // Packets sit at the head of equal windows spread across the run.
    const std::size_t window = nsub / sc.packets_per_run;
    const auto pd = static_cast<std::size_t>(std::max<long long>(
        1, std::llround(sc.symbols_per_packet / sc.data_rate / sc.substep)));
    const std::size_t span = std::min(pd, window);
    std::vector<PacketResult> packets;
    packets.reserve(sc.packets_per_run);
    std::vector<ChannelSample> win;
    for (std::size_t k = 0; k < sc.packets_per_run; ++k) {
        const std::size_t start = k * window;
        win.assign(channel.begin() + start, channel.begin() + start + span);
        packets.push_back(eval_packet(link, win));
    }

    result.metrics = summarize_run(packets, off_x, off_y, sc.data_rate);
    result.frac_offset_above_edge =
        static_cast<double>(above_edge) / static_cast<double>(nsub);
    result.offsets_x = std::move(off_x);
    result.offsets_y = std::move(off_y);
    return result;
}

std::vector<SweepRow> run_sweep(const std::vector<ScenarioConfig>& rows, Exec exec) {
    std::vector<SweepRow> out(rows.size());
    parallel_for(exec, rows.size(), [&](std::size_t i) {
        out[i].config = rows[i];
        try {
            const RunResult r = run_scenario(rows[i]);
            out[i].metrics = r.metrics;
            out[i].frac_offset_above_edge = r.frac_offset_above_edge;
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

}  // namespace watrack
