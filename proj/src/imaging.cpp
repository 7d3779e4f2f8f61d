#include "watrack/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

namespace watrack {

namespace {

inline double pixel_coord_m(int idx, int extent, double px_per_m) {
    return (idx - 0.5 * (extent - 1)) / px_per_m;
}

}  // namespace

Frame render_frame(const RenderConfig& cfg, double cx, double cy,
                   std::uint64_t seed) {
    Frame f;
    f.width = cfg.width;
    f.height = cfg.height;
    f.px_per_m = cfg.px_per_m;
    f.pixels.assign(static_cast<std::size_t>(cfg.width) * cfg.height, 0.0f);

    // Spot support: beyond 5 sigma the Gaussian is < 4e-6 of the peak,
    // far below both quantization and the detection threshold.
    const double half_w = 0.5 * (cfg.width - 1);
    const double half_h = 0.5 * (cfg.height - 1);
    const double reach = 5.0 * cfg.sigma * cfg.px_per_m;
    const double cx_px = cx * cfg.px_per_m + half_w;
    const double cy_px = cy * cfg.px_per_m + half_h;
    const int x0 = std::max(0, static_cast<int>(std::floor(cx_px - reach)));
    const int x1 = std::min(cfg.width - 1, static_cast<int>(std::ceil(cx_px + reach)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy_px - reach)));
    const int y1 = std::min(cfg.height - 1, static_cast<int>(std::ceil(cy_px + reach)));

    const double inv2s2 = 1.0 / (2.0 * cfg.sigma * cfg.sigma);
    for (int y = y0; y <= y1; ++y) {
        const double dy = pixel_coord_m(y, cfg.height, cfg.px_per_m) - cy;
        for (int x = x0; x <= x1; ++x) {
            const double dx = pixel_coord_m(x, cfg.width, cfg.px_per_m) - cx;
            f.at(x, y) = static_cast<float>(
                cfg.peak * std::exp(-(dx * dx + dy * dy) * inv2s2));
        }
    }

    if (cfg.noise_sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n(0.0, cfg.noise_sigma);
        for (float& p : f.pixels) p = static_cast<float>(p + n(rng));
    }
    for (float& p : f.pixels) p = std::clamp(p, 0.0f, 255.0f);
    return f;
}

Frame resize_bilinear(const Frame& in, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0 || in.width <= 0 || in.height <= 0)
        throw std::invalid_argument("resize dimensions must be positive");
    Frame out;
    out.width = out_w;
    out.height = out_h;
    out.px_per_m = in.px_per_m * out_w / in.width;
    out.pixels.resize(static_cast<std::size_t>(out_w) * out_h);

    const double sx = static_cast<double>(in.width) / out_w;
    const double sy = static_cast<double>(in.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        // Align pixel centers between the grids.
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, in.height - 1.0);
        const int y_lo = static_cast<int>(fy);
        const int y_hi = std::min(y_lo + 1, in.height - 1);
        const double wy = fy - y_lo;
        for (int x = 0; x < out_w; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, in.width - 1.0);
            const int x_lo = static_cast<int>(fx);
            const int x_hi = std::min(x_lo + 1, in.width - 1);
            const double wx = fx - x_lo;
            const double top = (1.0 - wx) * in.at(x_lo, y_lo) + wx * in.at(x_hi, y_lo);
            const double bot = (1.0 - wx) * in.at(x_lo, y_hi) + wx * in.at(x_hi, y_hi);
            out.at(x, y) = static_cast<float>((1.0 - wy) * top + wy * bot);
        }
    }
    return out;
}

std::vector<std::uint8_t> adaptive_threshold(const Frame& f, double frac) {
    std::vector<std::uint8_t> mask(f.pixels.size(), 0);
    float peak = 0.0f;
    for (float p : f.pixels) peak = std::max(peak, p);
    if (peak <= 0.0f) return mask;
    const float thr = static_cast<float>(frac * peak);
    for (std::size_t i = 0; i < f.pixels.size(); ++i) mask[i] = f.pixels[i] > thr;
    return mask;
}

std::vector<std::uint8_t> morph_open(const std::vector<std::uint8_t>& mask,
                                     int width, int height, int r) {
    if (r <= 0) return mask;
    auto sweep = [&](const std::vector<std::uint8_t>& src, bool erode) {
        std::vector<std::uint8_t> dst(src.size(), 0);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                bool all = true, any = false;
                for (int dy = -r; dy <= r && (all || !any); ++dy) {
                    for (int dx = -r; dx <= r; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        const bool in = nx >= 0 && nx < width && ny >= 0 && ny < height;
                        const bool v = in && src[static_cast<std::size_t>(ny) * width + nx];
                        all = all && v;
                        any = any || v;
                    }
                }
                dst[static_cast<std::size_t>(y) * width + x] = erode ? all : any;
            }
        }
        return dst;
    };
    return sweep(sweep(mask, true), false);
}

std::optional<Blob> detect_blob(const Frame& f, const std::vector<std::uint8_t>& mask,
                                int min_area) {
    const int w = f.width, h = f.height;
    std::vector<int> label(mask.size(), -1);
    std::optional<Blob> best;
    std::vector<std::size_t> stack;
    int next = 0;
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (!mask[start] || label[start] >= 0) continue;
        // Flood-fill one 8-connected component, accumulating its moments.
        double mass = 0.0, mx = 0.0, my = 0.0;
        int area = 0;
        stack.assign(1, start);
        label[start] = next;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
            const double v = f.pixels[i];
            mass += v;
            mx += v * x;
            my += v * y;
            ++area;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                    if (mask[j] && label[j] < 0) {
                        label[j] = next;
                        stack.push_back(j);
                    }
                }
            }
        }
        ++next;
        if (area < min_area || mass <= 0.0) continue;
        if (!best || mass > best->mass) best = Blob{mx / mass, my / mass, area, mass};
    }
    return best;
}

std::optional<SpotLocation> locate_spot(const Frame& raw, const PipelineConfig& cfg) {
    const Frame work = (raw.width == cfg.proc_width && raw.height == cfg.proc_height)
                           ? raw
                           : resize_bilinear(raw, cfg.proc_width, cfg.proc_height);
    auto mask = adaptive_threshold(work, cfg.threshold_frac);
    mask = morph_open(mask, work.width, work.height, cfg.open_radius);
    const auto blob = detect_blob(work, mask, cfg.min_area);
    if (!blob) return std::nullopt;
    SpotLocation loc;
    loc.px_x = blob->cx;
    loc.px_y = blob->cy;
    loc.x = (blob->cx - 0.5 * (work.width - 1)) / work.px_per_m;
    loc.y = (blob->cy - 0.5 * (work.height - 1)) / work.px_per_m;
    loc.area = blob->area;
    loc.mass = blob->mass;
    return loc;
}

void write_pgm(const Frame& f, const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << (binary ? "P5" : "P2") << "\n" << f.width << " " << f.height << "\n255\n";
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            const int v = std::clamp(static_cast<int>(std::lround(f.at(x, y))), 0, 255);
            if (binary) {
                out.put(static_cast<char>(v));
            } else {
                out << v << (x + 1 == f.width ? "\n" : " ");
            }
        }
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace watrack
