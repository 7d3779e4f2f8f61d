// File formats: the metrics CSV (one row per run), the per-cycle trace CSV,
// the offset-series format consumed by the characterization path, and the
// characterization report. Doubles serialize with 17 significant digits so
// a write/read round trip is value-exact and reruns are byte-comparable.
#pragma once

#include <string>
#include <vector>

#include "watrack/engine.hpp"
#include "watrack/wave.hpp"

namespace watrack {

// One row of the metrics table.
struct MetricsRow {
    std::string scenario;
    double ascr = 0.0;
    double rx_speed = 0.0;
    double data_rate = 0.0;
    bool tracking = true;
    double plr = 0.0;
    double mean_ber = 0.0;
    double throughput = 0.0;
    double offset_std_x = 0.0;
    double offset_std_y = 0.0;
};

extern const char* const kMetricsHeader;

std::string format_double(double v);  // shortest 17-significant-digit form

MetricsRow metrics_row(const ScenarioConfig& sc, const RunMetrics& m);

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

void write_trace_csv(const std::string& path, const std::vector<CycleRecord>& cycles);

// Offset-series file: "tau_s=<step>" line, a "dx_m,dy_m" header, then one
// offset pair per line.
void write_offset_series(const std::string& path, double tau,
                         const std::vector<SpotSample>& samples);
std::vector<SpotSample> read_offset_series(const std::string& path);

// Human-readable characterization summary.
std::string format_ascr_report(const AscrReport& rep, double tau);

// Wave-parameter file: a single [wave <name>] section in the config syntax.
void write_wave_params(const std::string& path, const std::string& name,
                       const WaveParams& p, double achieved_ascr);

}  // namespace watrack
