// Optical link budget: fraction of a Gaussian power footprint captured by a
// circular aperture versus pointing offset, the resulting OOK bit-error
// rate, and packet-level loss statistics over a run.
#pragma once

#include <cstddef>
#include <vector>

#include "watrack/parallel.hpp"

namespace watrack {

struct LinkConfig {
    double spot_sigma = 0.001;        // power-footprint radius parameter [m]
    double aperture_radius = 0.006;   // receiver aperture [m]
    double fec_edge_offset = 0.007;   // offset where BER hits the FEC limit [m]
    double fec_ber = 3.8e-3;          // post-FEC correctable BER ceiling
    double grid_step = 5e-5;          // coupling-table resolution [m]
    double grid_max = 0.03;           // coupling-table range [m]
};

// Gaussian tail probability Q(x).
double q_func(double x);
// Inverse of q_func on (0, 0.5); bisection, ~1e-12 absolute.
double q_func_inv(double p);

class LinkModel {
  public:
    // Builds the radial coupling table (numeric disc integration per radius;
    // radii are independent, so the fill parallelizes) and calibrates the
    // zero-offset SNR so that ber(fec_edge_offset) == fec_ber.
    explicit LinkModel(const LinkConfig& cfg, Exec exec = Exec::Serial);

    // Fraction of transmitted power inside the aperture at radial offset r.
    double coupled_fraction(double r) const;

    // OOK bit-error rate at a radial pointing offset; electrical SNR scales
    // with the square of the coupled power.
    double ber(double r) const;

    double snr0() const { return snr0_; }
    const LinkConfig& config() const { return cfg_; }

  private:
    LinkConfig cfg_;
    std::vector<double> table_;  // coupled fraction at i * grid_step
    double snr0_ = 0.0;
};

// One per-sample channel observation inside a packet window.
struct ChannelSample {
    double t = 0.0;
    double offset_r = 0.0;   // radial pointing offset [m]
    bool outage = false;     // no refracted beam this sample
};

struct PacketResult {
    double t_start = 0.0;
    double ber = 0.0;        // window-averaged bit-error rate
    bool lost = false;       // ber beyond the FEC ceiling
};

// Average the channel over the window samples; outage samples contribute
// the no-signal error rate (0.5).
PacketResult eval_packet(const LinkModel& link,
                         const std::vector<ChannelSample>& window);

struct RunMetrics {
    std::size_t packets_total = 0;
    std::size_t packets_lost = 0;
    double plr = 0.0;
    double mean_ber = 0.0;        // mean of packet BERs
    double throughput = 0.0;      // data_rate * (1 - plr) [bit/s]
    double offset_std_x = 0.0;    // per-axis offset spread over the run [m]
    double offset_std_y = 0.0;
    double max_abs_offset = 0.0;  // largest radial offset seen [m]
};

RunMetrics summarize_run(const std::vector<PacketResult>& packets,
                         const std::vector<double>& offsets_x,
                         const std::vector<double>& offsets_y,
                         double data_rate);

}  // namespace watrack
