// Timing harness for the data-parallel kernels: batch offset inversion,
// coupling-table construction, and sweep-row execution, each serial vs
// OpenMP. Also cross-checks that both paths agree.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "watrack/engine.hpp"
#include "watrack/link.hpp"
#include "watrack/wave.hpp"

using namespace watrack;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s) {
    std::printf("%-24s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx\n",
                name, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s);
}

}  // namespace

int main() {
    const GeometryConstants geom;

    // Batch inversion over a characterization-sized sample set.
    WaveParams wp;
    wp.amplitude = 0.2;
    wp.omega = 4.0;
    std::vector<SpotSample> samples(10000);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double t = static_cast<double>(i) / 220.0;
        const SlopeState s = sample_slope(wp, t);
        samples[i] = SpotSample{t, refract_displacement(s.gamma_x, geom),
                                refract_displacement(s.gamma_y, geom)};
    }
    auto t0 = Clock::now();
    const auto slopes_serial = invert_offsets(samples, geom, Exec::Serial);
    const double inv_serial = seconds_since(t0);
    t0 = Clock::now();
    const auto slopes_parallel = invert_offsets(samples, geom, Exec::Parallel);
    const double inv_parallel = seconds_since(t0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (slopes_serial[i].fy != slopes_parallel[i].fy) {
            std::fprintf(stderr, "inversion mismatch at %zu\n", i);
            return 1;
        }
    }
    report("invert_offsets[10k]", inv_serial, inv_parallel);

    // Coupling-table build at a finer-than-default grid for a fair load.
    LinkConfig lc;
    lc.grid_step = 1e-5;
    t0 = Clock::now();
    const LinkModel link_serial(lc, Exec::Serial);
    const double tab_serial = seconds_since(t0);
    t0 = Clock::now();
    const LinkModel link_parallel(lc, Exec::Parallel);
    const double tab_parallel = seconds_since(t0);
    for (double r = 0.0; r <= 0.02; r += 1e-4) {
        if (link_serial.coupled_fraction(r) != link_parallel.coupled_fraction(r)) {
            std::fprintf(stderr, "coupling mismatch at r=%g\n", r);
            return 1;
        }
    }
    report("coupling_table[3k pts]", tab_serial, tab_parallel);

    // Sweep rows: short independent runs.
    std::vector<ScenarioConfig> rows(8);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].name = "bench";
        rows[i].data_rate = 1e9;
        rows[i].duration = 1.0;
        rows[i].rx_speed = 1.0;
        rows[i].seed = i;
    }
    t0 = Clock::now();
    const auto sweep_serial = run_sweep(rows, Exec::Serial);
    const double sw_serial = seconds_since(t0);
    t0 = Clock::now();
    const auto sweep_parallel = run_sweep(rows, Exec::Parallel);
    const double sw_parallel = seconds_since(t0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!sweep_serial[i].metrics || !sweep_parallel[i].metrics ||
            sweep_serial[i].metrics->mean_ber != sweep_parallel[i].metrics->mean_ber) {
            std::fprintf(stderr, "sweep mismatch at row %zu\n", i);
            return 1;
        }
    }
    report("sweep_rows[8x1s]", sw_serial, sw_parallel);
    return 0;
}
