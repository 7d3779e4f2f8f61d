// Feedback-camera image chain: render the retro-reflected spot into a frame,
// then the detection pipeline (downscale, adaptive threshold, morphological
// opening, connected components, weighted centroid) that turns a frame into
// a metric spot position.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace watrack {

// Row-major grayscale frame; values live in [0, 255] but stay floating
// point through the pipeline (quantization happens only when writing PGM).
struct Frame {
    int width = 0, height = 0;
    double px_per_m = 0.0;       // sensor scale at the observed plane
    std::vector<float> pixels;   // size width*height, index [y*width + x]

    float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct RenderConfig {
    int width = 200, height = 200;
    double px_per_m = 200.0 / 0.24;  // 24 cm field of view
    double peak = 200.0;             // spot peak intensity [counts]
    double sigma = 0.006;            // rendered spot radius parameter [m]
    double noise_sigma = 0.0;        // additive Gaussian noise [counts]
};

// Render a Gaussian spot centered (cx, cy) meters from the frame center.
// x grows with column index, y with row index; pixel centers sit on a grid
// symmetric about the frame center. Noise (when enabled) is reproducible
// from `seed` and applied to every pixel before clamping to [0, 255].
Frame render_frame(const RenderConfig& cfg, double cx, double cy,
                   std::uint64_t seed = 0);

struct PipelineConfig {
    int proc_width = 100, proc_height = 100;  // working resolution
    double threshold_frac = 0.2;              // of the frame's peak value
    int open_radius = 1;                      // structuring-element radius
    int min_area = 4;                         // smallest acceptable blob [px]
};

// Bilinear downscale to the working resolution (scale-aware px_per_m).
Frame resize_bilinear(const Frame& in, int out_w, int out_h);

// Mask of pixels strictly above threshold_frac * max(frame). An all-dark
// frame yields an empty mask.
std::vector<std::uint8_t> adaptive_threshold(const Frame& f, double frac);

// Morphological opening (erosion then dilation) with a square structuring
// element of side 2r+1. r = 0 is the identity.
std::vector<std::uint8_t> morph_open(const std::vector<std::uint8_t>& mask,
                                     int width, int height, int r);

struct Blob {
    double cx = 0.0, cy = 0.0;   // intensity-weighted centroid [px]
    int area = 0;                // pixel count
    double mass = 0.0;           // summed intensity
};

// Largest blob by summed intensity among 8-connected mask components with
// area >= min_area; nullopt when none qualifies.
std::optional<Blob> detect_blob(const Frame& f, const std::vector<std::uint8_t>& mask,
                                int min_area);

struct SpotLocation {
    double px_x = 0.0, px_y = 0.0;  // centroid in working-resolution pixels
    double x = 0.0, y = 0.0;        // centroid in meters from frame center
    int area = 0;
    double mass = 0.0;
};

// Full pipeline on a raw frame; nullopt when no acceptable blob survives.
std::optional<SpotLocation> locate_spot(const Frame& raw, const PipelineConfig& cfg);

// Portable graymap output, binary (P5) or ASCII (P2), maxval 255.
void write_pgm(const Frame& f, const std::string& path, bool binary = true);

}  // namespace watrack
