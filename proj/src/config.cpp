#include "watrack/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace watrack {

ConfigError::ConfigError(const std::string& msg, int line_no)
    : std::runtime_error("config line " + std::to_string(line_no) + ": " + msg),
      line(line_no) {}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' &&
            c != '.')
            return false;
    }
    return true;
}

double to_double(const std::string& v, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("expected a number, got '" + v + "'", line);
    return x;
}

std::uint64_t to_u64(const std::string& v, int line) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || v.find('-') != std::string::npos)
        throw ConfigError("expected a non-negative integer, got '" + v + "'", line);
    return x;
}

bool to_bool(const std::string& v, int line) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("expected on/off, got '" + v + "'", line);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<double> to_double_list(const std::string& v, int line) {
    std::vector<double> out;
    for (const std::string& item : split_list(v)) out.push_back(to_double(item, line));
    return out;
}

std::vector<bool> to_bool_list(const std::string& v, int line) {
    std::vector<bool> out;
    for (const std::string& item : split_list(v)) out.push_back(to_bool(item, line));
    return out;
}

struct KeyValue {
    std::string value;
    int line = 0;
};

struct Section {
    std::string kind, name;
    int line = 0;
    std::map<std::string, KeyValue> kv;
    std::vector<std::string> order;  // keys in file order
};

std::vector<Section> tokenize(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("unterminated section header", line_no);
            const std::string inner = trim(line.substr(1, line.size() - 2));
            const std::size_t sp = inner.find_first_of(" \t");
            Section s;
            s.kind = sp == std::string::npos ? inner : trim(inner.substr(0, sp));
            s.name = sp == std::string::npos ? "" : trim(inner.substr(sp + 1));
            s.line = line_no;
            if (s.kind != "scenario" && s.kind != "sweep" && s.kind != "wave")
                throw ConfigError("unknown section kind '" + s.kind + "'", line_no);
            if (s.name.empty()) s.name = s.kind;
            if (!valid_name(s.name))
                throw ConfigError("invalid section name '" + s.name + "'", line_no);
            sections.push_back(std::move(s));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line_no);
        if (sections.empty())
            throw ConfigError("key outside of any section", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no);
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
        Section& s = sections.back();
        if (s.kv.count(key))
            throw ConfigError("duplicate key '" + key + "'", line_no);
        s.kv[key] = KeyValue{value, line_no};
        s.order.push_back(key);
    }
    return sections;
}

// Keys shared by [scenario] and the [sweep] base configuration.
bool apply_common_key(ScenarioConfig& sc, const std::string& key,
                      const std::string& v, int line) {
    if (key == "duration") sc.duration = to_double(v, line);
    else if (key == "seed") sc.seed = to_u64(v, line);
    else if (key == "rx_range") sc.rx_range = to_double(v, line);
    else if (key == "rx_turnaround") sc.rx_turnaround = to_double(v, line);
    else if (key == "noise_sigma") sc.noise_sigma = to_double(v, line);
    else if (key == "camera_spot_sigma") sc.camera_spot_sigma = to_double(v, line);
    else if (key == "camera_peak") sc.camera_peak = to_double(v, line);
    else if (key == "cycle_period") sc.cycle_period = to_double(v, line);
    else if (key == "substep") sc.substep = to_double(v, line);
    else if (key == "capture_offset") sc.capture_offset = to_double(v, line);
    else if (key == "processing_latency") sc.processing_latency = to_double(v, line);
    else if (key == "ctrl_alpha") sc.ctrl.alpha = to_double(v, line);
    else if (key == "ctrl_p1") sc.ctrl.p1 = to_double(v, line);
    else if (key == "ctrl_p2") sc.ctrl.p2 = to_double(v, line);
    else if (key == "ctrl_q") sc.ctrl.q = to_double(v, line);
    else if (key == "ctrl_ki") sc.ctrl.k_i = to_double(v, line);
    else if (key == "ctrl_kd") sc.ctrl.k_d = to_double(v, line);
    else if (key == "ctrl_integ_max") sc.ctrl.integ_max = to_double(v, line);
    else if (key == "packets_per_run")
        sc.packets_per_run = static_cast<std::size_t>(to_u64(v, line));
    else if (key == "symbols_per_packet") sc.symbols_per_packet = to_double(v, line);
    else if (key == "wave_shape") {
        if (v != "sine" && v != "board")
            throw ConfigError("wave_shape must be sine or board", line);
        sc.wave_shape = v;
    } else {
        return false;
    }
    return true;
}

struct PendingWaveRef {
    std::size_t scenario_index;
    std::string wave_name;
    int line;
};

void parse_scenario(const Section& s, ConfigFile& out,
                    std::vector<PendingWaveRef>& refs) {
    ScenarioConfig sc;
    sc.name = s.name;
    bool have_rate = false, have_ascr = false, have_amp = false, have_ref = false;
    WaveParams wp;
    for (const std::string& key : s.order) {
        const KeyValue& kv = s.kv.at(key);
        const std::string& v = kv.value;
        const int line = kv.line;
        if (apply_common_key(sc, key, v, line)) continue;
        if (key == "data_rate") {
            sc.data_rate = to_double(v, line);
            have_rate = true;
        } else if (key == "tracking") {
            sc.tracking = to_bool(v, line);
        } else if (key == "rx_speed") {
            sc.rx_speed = to_double(v, line);
        } else if (key == "rx_start") {
            sc.rx_start = to_double(v, line);
        } else if (key == "wave_ascr") {
            sc.wave_ascr = to_double(v, line);
            have_ascr = true;
        } else if (key == "wave") {
            refs.push_back({out.scenarios.size(), v, line});
            have_ref = true;
        } else if (key == "wave_amplitude") {
            wp.amplitude = to_double(v, line);
            have_amp = true;
        } else if (key == "wave_omega") {
            wp.omega = to_double(v, line);
        } else if (key == "wave_phase") {
            wp.phase = to_double(v, line);
        } else if (key == "wave_axis_mix") {
            wp.axis_mix = to_double(v, line);
        } else if (key == "wave_harmonic2") {
            wp.harmonic2 = to_double(v, line);
        } else {
            throw ConfigError("unknown scenario key '" + key + "'", line);
        }
    }
    if (!have_rate) throw ConfigError("scenario requires data_rate", s.line);
    if (have_ascr + have_amp + have_ref > 1)
        throw ConfigError(
            "wave_ascr, wave_amplitude, and wave are mutually exclusive", s.line);
    if (!have_amp &&
        (s.kv.count("wave_omega") || s.kv.count("wave_phase") ||
         s.kv.count("wave_axis_mix") || s.kv.count("wave_harmonic2")))
        throw ConfigError("wave_* parameters require wave_amplitude", s.line);
    if (have_amp) sc.wave = wp;
    out.scenarios.push_back(std::move(sc));
}

void parse_sweep(const Section& s, ConfigFile& out) {
    SweepSpec sp;
    sp.name = s.name;
    sp.base.name = s.name;
    bool have_rate = false;
    for (const std::string& key : s.order) {
        const KeyValue& kv = s.kv.at(key);
        const std::string& v = kv.value;
        const int line = kv.line;
        if (key == "ascr") {
            sp.ascr = to_double_list(v, line);
        } else if (key == "rx_speed") {
            sp.rx_speed = to_double_list(v, line);
        } else if (key == "data_rate") {
            sp.data_rate = to_double_list(v, line);
            have_rate = true;
        } else if (key == "tracking") {
            sp.tracking = to_bool_list(v, line);
        } else if (apply_common_key(sp.base, key, v, line)) {
        } else {
            throw ConfigError("unknown sweep key '" + key + "'", line);
        }
    }
    if (!have_rate || sp.data_rate.empty())
        throw ConfigError("sweep requires data_rate", s.line);
    out.sweeps.push_back(std::move(sp));
}

void parse_wave(const Section& s, ConfigFile& out) {
    WaveParams wp;
    bool have_amp = false;
    for (const std::string& key : s.order) {
        const KeyValue& kv = s.kv.at(key);
        const std::string& v = kv.value;
        const int line = kv.line;
        if (key == "amplitude") {
            wp.amplitude = to_double(v, line);
            have_amp = true;
        } else if (key == "omega") {
            wp.omega = to_double(v, line);
        } else if (key == "phase") {
            wp.phase = to_double(v, line);
        } else if (key == "axis_mix") {
            wp.axis_mix = to_double(v, line);
        } else if (key == "harmonic2") {
            wp.harmonic2 = to_double(v, line);
        } else {
            throw ConfigError("unknown wave key '" + key + "'", line);
        }
    }
    if (!have_amp) throw ConfigError("wave requires amplitude", s.line);
    out.waves.emplace_back(s.name, wp);
}

}  // namespace

ConfigFile parse_config(const std::string& text) {
    ConfigFile out;
    std::vector<PendingWaveRef> refs;
    std::set<std::pair<std::string, std::string>> seen;
    for (const Section& s : tokenize(text)) {
        if (!seen.insert({s.kind, s.name}).second)
            throw ConfigError("duplicate section [" + s.kind + " " + s.name + "]",
                              s.line);
        if (s.kind == "scenario") parse_scenario(s, out, refs);
        else if (s.kind == "sweep") parse_sweep(s, out);
        else parse_wave(s, out);
    }
    for (const PendingWaveRef& r : refs) {
        const auto it = std::find_if(
            out.waves.begin(), out.waves.end(),
            [&](const auto& w) { return w.first == r.wave_name; });
        if (it == out.waves.end())
            throw ConfigError("wave section '" + r.wave_name + "' not found", r.line);
        out.scenarios[r.scenario_index].wave = it->second;
    }
    return out;
}

ConfigFile load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

CalibrationOptions calibration_options_for_shape(const std::string& shape) {
    CalibrationOptions opts;
    if (shape == "sine") {
        opts.omega0 = 4.0;
        opts.harmonic_ratio = 0.0;
    } else if (shape == "board") {
        opts.omega0 = 0.9;
        opts.harmonic_ratio = 0.5;
    } else {
        throw std::invalid_argument("unknown wave shape '" + shape + "'");
    }
    return opts;
}

void resolve_scenario_wave(ScenarioConfig& sc, Exec exec) {
    if (sc.wave || sc.wave_ascr <= 0.0) return;
    const CalibrationOptions opts = calibration_options_for_shape(sc.wave_shape);
    sc.wave = calibrate_wave(sc.wave_ascr, sc.geom, opts, exec).params;
}

std::vector<ScenarioConfig> expand_sweep(const SweepSpec& spec, Exec exec) {
    // Calibrate each distinct wave rate once, shared across rows.
    std::map<double, WaveParams> waves;
    for (double a : spec.ascr) {
        if (a > 0.0 && !waves.count(a)) {
            const CalibrationOptions opts =
                calibration_options_for_shape(spec.base.wave_shape);
            waves[a] = calibrate_wave(a, spec.base.geom, opts, exec).params;
        }
    }
    std::vector<ScenarioConfig> rows;
    std::size_t idx = 0;
    for (double a : spec.ascr) {
        for (double v : spec.rx_speed) {
            for (double rate : spec.data_rate) {
                for (bool tr : spec.tracking) {
                    ScenarioConfig sc = spec.base;
                    char suffix[16];
                    std::snprintf(suffix, sizeof suffix, "_%03zu", idx);
                    sc.name = spec.name + suffix;
                    sc.seed = spec.base.seed + idx;
                    sc.wave_ascr = a;
                    if (a > 0.0) sc.wave = waves.at(a);
                    sc.rx_speed = v;
                    sc.data_rate = rate;
                    sc.tracking = tr;
                    rows.push_back(std::move(sc));
                    ++idx;
                }
            }
        }
    }
    return rows;
}

}  // namespace watrack
