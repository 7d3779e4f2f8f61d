#include "watrack/metrics_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace watrack {

const char* const kMetricsHeader =
    "scenario,ascr,rx_speed,data_rate,tracking,plr,mean_ber,throughput,"
    "offset_std_x,offset_std_y";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

MetricsRow metrics_row(const ScenarioConfig& sc, const RunMetrics& m) {
    MetricsRow r;
    r.scenario = sc.name;
    r.ascr = sc.wave_ascr;
    r.rx_speed = sc.rx_speed;
    r.data_rate = sc.data_rate;
    r.tracking = sc.tracking;
    r.plr = m.plr;
    r.mean_ber = m.mean_ber;
    r.throughput = m.throughput;
    r.offset_std_x = m.offset_std_x;
    r.offset_std_y = m.offset_std_y;
    return r;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

double parse_double(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::runtime_error("bad numeric field '" + s + "' in " + what);
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
    std::ofstream out = open_out(path);
    out << kMetricsHeader << "\n";
    for (const MetricsRow& r : rows) {
        out << r.scenario << ',' << format_double(r.ascr) << ','
            << format_double(r.rx_speed) << ',' << format_double(r.data_rate) << ','
            << (r.tracking ? 1 : 0) << ',' << format_double(r.plr) << ','
            << format_double(r.mean_ber) << ',' << format_double(r.throughput) << ','
            << format_double(r.offset_std_x) << ',' << format_double(r.offset_std_y)
            << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader)
        throw std::runtime_error("unexpected metrics header in " + path);
    std::vector<MetricsRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 10)
            throw std::runtime_error("bad metrics row in " + path + ": " + line);
        MetricsRow r;
        r.scenario = f[0];
        r.ascr = parse_double(f[1], path);
        r.rx_speed = parse_double(f[2], path);
        r.data_rate = parse_double(f[3], path);
        r.tracking = parse_double(f[4], path) != 0.0;
        r.plr = parse_double(f[5], path);
        r.mean_ber = parse_double(f[6], path);
        r.throughput = parse_double(f[7], path);
        r.offset_std_x = parse_double(f[8], path);
        r.offset_std_y = parse_double(f[9], path);
        rows.push_back(r);
    }
    return rows;
}

void write_trace_csv(const std::string& path, const std::vector<CycleRecord>& cycles) {
    std::ofstream out = open_out(path);
    out << "t,offset_x,offset_y,located,meas_x,meas_y,tilt_x,tilt_y,s_x,s_y\n";
    for (const CycleRecord& c : cycles) {
        out << format_double(c.t) << ',' << format_double(c.offset_x) << ','
            << format_double(c.offset_y) << ',' << (c.located ? 1 : 0) << ','
            << format_double(c.meas_x) << ',' << format_double(c.meas_y) << ','
            << format_double(c.tilt_x) << ',' << format_double(c.tilt_y) << ','
            << format_double(c.s_x) << ',' << format_double(c.s_y) << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

void write_offset_series(const std::string& path, double tau,
                         const std::vector<SpotSample>& samples) {
    std::ofstream out = open_out(path);
    out << "tau_s=" << format_double(tau) << "\n";
    out << "dx_m,dy_m\n";
    for (const SpotSample& s : samples)
        out << format_double(s.x) << ',' << format_double(s.y) << "\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<SpotSample> read_offset_series(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("tau_s=", 0) != 0)
        throw std::runtime_error("offset series " + path +
                                 " must start with a tau_s= line");
    const double tau = parse_double(line.substr(6), path);
    if (tau <= 0.0) throw std::runtime_error("tau_s must be > 0 in " + path);
    if (!std::getline(in, line) || line != "dx_m,dy_m")
        throw std::runtime_error("offset series " + path +
                                 " must have a dx_m,dy_m header");
    std::vector<SpotSample> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 2)
            throw std::runtime_error("bad offset row in " + path + ": " + line);
        SpotSample s;
        s.t = static_cast<double>(samples.size()) * tau;
        s.x = parse_double(f[0], path);
        s.y = parse_double(f[1], path);
        samples.push_back(s);
    }
    return samples;
}

std::string format_ascr_report(const AscrReport& rep, double tau) {
    std::ostringstream out;
    out << "frames=" << rep.scr.size() + 1 << "\n";
    out << "tau_s=" << format_double(tau) << "\n";
    out << "ascr_rad_per_s=" << format_double(rep.ascr) << "\n";
    out << "peak_scr_rad_per_s=" << format_double(rep.peak_scr) << "\n";
    out << "frac_speed_above_1m_s=" << format_double(rep.frac_speed_above_1) << "\n";
    out << "frac_speed_above_2m_s=" << format_double(rep.frac_speed_above_2) << "\n";
    return out.str();
}

void write_wave_params(const std::string& path, const std::string& name,
                       const WaveParams& p, double achieved_ascr) {
    std::ofstream out = open_out(path);
    out << "# achieved ascr_rad_per_s = " << format_double(achieved_ascr) << "\n";
    out << "[wave " << name << "]\n";
    out << "amplitude = " << format_double(p.amplitude) << "\n";
    out << "omega = " << format_double(p.omega) << "\n";
    out << "phase = " << format_double(p.phase) << "\n";
    out << "axis_mix = " << format_double(p.axis_mix) << "\n";
    out << "harmonic2 = " << format_double(p.harmonic2) << "\n";
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace watrack
