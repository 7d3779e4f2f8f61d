// Command-line front end: run a scenario, expand and run a sweep, compute
// the surface-characterization report for a wave or a recorded offset
// series, and calibrate wave parameters to a requested slope-change rate.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "watrack/config.hpp"
#include "watrack/engine.hpp"
#include "watrack/metrics_io.hpp"
#include "watrack/wave.hpp"

namespace {

using namespace watrack;

std::string trace_path_for(const std::string& out) {
    std::filesystem::path p(out);
    const std::string stem = p.stem().string();
    return (p.parent_path() / (stem + "_trace.csv")).string();
}

ScenarioConfig pick_scenario(const ConfigFile& cfg, const std::string& name) {
    if (cfg.scenarios.empty())
        throw std::invalid_argument("config has no [scenario] section");
    if (name.empty()) {
        if (cfg.scenarios.size() > 1)
            throw std::invalid_argument(
                "config has several scenarios; pick one with --scenario");
        return cfg.scenarios.front();
    }
    for (const ScenarioConfig& sc : cfg.scenarios)
        if (sc.name == name) return sc;
    throw std::invalid_argument("scenario '" + name + "' not found");
}

int cmd_run(const std::string& config_path, const std::string& scenario_name,
            const std::string& out, bool with_trace, const std::string& frames_dir,
            const CLI::Option* seed_opt, std::uint64_t seed) {
    ScenarioConfig sc = pick_scenario(load_config_file(config_path), scenario_name);
    if (seed_opt->count()) sc.seed = seed;
    if (!frames_dir.empty()) sc.frames_dir = frames_dir;
    resolve_scenario_wave(sc, Exec::Parallel);

    const RunResult res = run_scenario(sc);
    write_metrics_csv(out, {metrics_row(sc, res.metrics)});
    if (with_trace) write_trace_csv(trace_path_for(out), res.cycles);

    std::printf("scenario %s: plr=%g mean_ber=%g throughput=%g max_offset_mm=%g\n",
                sc.name.c_str(), res.metrics.plr, res.metrics.mean_ber,
                res.metrics.throughput, res.metrics.max_abs_offset * 1e3);
    std::printf("wrote %s\n", out.c_str());
    if (with_trace) std::printf("wrote %s\n", trace_path_for(out).c_str());
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& sweep_name,
              const std::string& out, const CLI::Option* seed_opt,
              std::uint64_t seed, bool serial) {
    const ConfigFile cfg = load_config_file(config_path);
    const SweepSpec* spec = nullptr;
    if (cfg.sweeps.empty()) throw std::invalid_argument("config has no [sweep] section");
    if (sweep_name.empty()) {
        if (cfg.sweeps.size() > 1)
            throw std::invalid_argument("config has several sweeps; pick one with --sweep");
        spec = &cfg.sweeps.front();
    } else {
        for (const SweepSpec& s : cfg.sweeps)
            if (s.name == sweep_name) spec = &s;
        if (!spec) throw std::invalid_argument("sweep '" + sweep_name + "' not found");
    }
    SweepSpec chosen = *spec;
    if (seed_opt->count()) chosen.base.seed = seed;

    const Exec exec = serial ? Exec::Serial : Exec::Parallel;
    const std::vector<ScenarioConfig> rows = expand_sweep(chosen, exec);
    const std::vector<SweepRow> results = run_sweep(rows, exec);

    std::vector<MetricsRow> table;
    int failures = 0;
    for (const SweepRow& r : results) {
        if (r.metrics) {
            table.push_back(metrics_row(r.config, *r.metrics));
        } else {
            ++failures;
            std::fprintf(stderr, "row %s failed: %s\n", r.config.name.c_str(),
                         r.error.c_str());
        }
    }
    write_metrics_csv(out, table);
    std::printf("wrote %s (%zu rows, %d failed)\n", out.c_str(), table.size(),
                failures);
    return failures == 0 ? 0 : 1;
}

int cmd_characterize(const std::string& config_path, const std::string& input_path,
                     const std::string& wave_name, const std::string& out,
                     int frames, double fps) {
    GeometryConstants geom;
    std::vector<SpotSample> samples;
    double tau = 0.0;
    if (!input_path.empty()) {
        samples = read_offset_series(input_path);
        if (samples.size() < 2)
            throw std::runtime_error("offset series has fewer than 2 samples");
        tau = samples[1].t - samples[0].t;
    } else {
        const ConfigFile cfg = load_config_file(config_path);
        if (cfg.waves.empty())
            throw std::invalid_argument("config has no [wave] section");
        const WaveParams* wp = nullptr;
        if (wave_name.empty()) {
            if (cfg.waves.size() > 1)
                throw std::invalid_argument("config has several waves; pick one with --wave");
            wp = &cfg.waves.front().second;
        } else {
            for (const auto& w : cfg.waves)
                if (w.first == wave_name) wp = &w.second;
            if (!wp) throw std::invalid_argument("wave '" + wave_name + "' not found");
        }
        validate_wave(*wp, geom);
        tau = 1.0 / fps;
        samples.resize(static_cast<std::size_t>(frames));
        for (int i = 0; i < frames; ++i) {
            const double t = i * tau;
            const SlopeState s = sample_slope(*wp, t);
            samples[i] = SpotSample{t, refract_displacement(s.gamma_x, geom),
                                    refract_displacement(s.gamma_y, geom)};
        }
    }
    const AscrReport rep = measure_ascr(samples, geom, Exec::Parallel);
    const std::string text = format_ascr_report(rep, tau);
    if (out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot open " + out + " for writing");
        f << text;
        std::printf("wrote %s\n", out.c_str());
    }
    return 0;
}

int cmd_calibrate(double target, const std::string& shape, double tol,
                  const std::string& out, const std::string& name) {
    GeometryConstants geom;
    CalibrationOptions opts = calibration_options_for_shape(shape);
    opts.rel_tol = tol;
    const CalibrationResult res = calibrate_wave(target, geom, opts, Exec::Parallel);
    std::printf("achieved ascr %.17g rad/s (target %.17g)\n", res.achieved, target);
    std::printf("amplitude=%.17g omega=%.17g harmonic2=%.17g\n", res.params.amplitude,
                res.params.omega, res.params.harmonic2);
    if (!out.empty()) {
        write_wave_params(out, name, res.params, res.achieved);
        std::printf("wrote %s\n", out.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beam-tracking simulator for a water-to-air optical link"};
    app.require_subcommand(1);

    std::string config_path, scenario_name, sweep_name, wave_name;
    std::string out = "metrics.csv", frames_dir, input_path, report_out;
    std::uint64_t seed = 0;
    bool with_trace = false, serial = false;
    int frames = 10000;
    double fps = 220.0, target = 0.0, tol = 1e-3;
    std::string shape = "sine", wave_out_name = "calibrated";

    CLI::App* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--scenario", scenario_name, "Scenario name");
    run->add_option("--out", out, "Metrics CSV path");
    CLI::Option* run_seed = run->add_option("--seed", seed, "Override the seed");
    run->add_flag("--trace", with_trace, "Also write the per-cycle trace CSV");
    run->add_option("--frames", frames_dir, "Dump capture frames (PGM) here");

    CLI::App* sweep = app.add_subcommand("sweep", "Run a scenario grid");
    sweep->add_option("--config", config_path, "Config file")->required();
    sweep->add_option("--sweep", sweep_name, "Sweep name");
    sweep->add_option("--out", out, "Metrics CSV path");
    CLI::Option* sweep_seed = sweep->add_option("--seed", seed, "Override the base seed");
    sweep->add_flag("--serial", serial, "Run rows on one thread");

    CLI::App* chr = app.add_subcommand(
        "characterize", "Slope-change-rate report for a wave or offset series");
    CLI::Option* chr_cfg = chr->add_option("--config", config_path, "Config with a [wave] section");
    CLI::Option* chr_in = chr->add_option("--input", input_path, "Offset-series file");
    chr->add_option("--wave", wave_name, "Wave section name");
    chr->add_option("--out", report_out, "Report path (default: stdout)");
    chr->add_option("--frames", frames, "Synthesized frame count")
        ->check(CLI::PositiveNumber);
    chr->add_option("--fps", fps, "Synthesized frame rate")->check(CLI::PositiveNumber);
    chr_cfg->excludes(chr_in);

    CLI::App* cal = app.add_subcommand("calibrate", "Find wave parameters for a rate");
    cal->add_option("--target", target, "Average slope-change rate [rad/s]")->required();
    cal->add_option("--shape", shape, "Wave family: sine or board")
        ->check(CLI::IsMember({"sine", "board"}));
    cal->add_option("--tol", tol, "Relative tolerance")->check(CLI::PositiveNumber);
    cal->add_option("--out", out, "Wave-parameter file")->expected(1);
    cal->add_option("--name", wave_out_name, "Wave section name");

    // calibrate --out has no useful default; suppress the metrics default.
    if (argc > 1 && std::string(argv[1]) == "calibrate") out.clear();

    try {
        app.parse(argc, argv);
        if (run->parsed())
            return cmd_run(config_path, scenario_name, out, with_trace, frames_dir,
                           run_seed, seed);
        if (sweep->parsed())
            return cmd_sweep(config_path, sweep_name, out, sweep_seed, seed, serial);
        if (chr->parsed()) {
            if (config_path.empty() && input_path.empty())
                throw CLI::RequiredError("--config or --input");
            return cmd_characterize(config_path, input_path, wave_name, report_out,
                                    frames, fps);
        }
        if (cal->parsed())
            return cmd_calibrate(target, shape, tol, out, wave_out_name);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
