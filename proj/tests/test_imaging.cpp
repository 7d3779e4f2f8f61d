#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "watrack/imaging.hpp"

using namespace watrack;

namespace {

const RenderConfig kCam;      // 200x200 over 24 cm
const PipelineConfig kPipe;   // 100x100 working resolution

}  // namespace

TEST_CASE("rendered spot peaks at its center pixel") {
    // Center the spot exactly on the pixel-(100,100) grid point.
    const double c = (100 - 0.5 * (kCam.width - 1)) / kCam.px_per_m;
    const Frame f = render_frame(kCam, c, c);
    CHECK(f.at(100, 100) == doctest::Approx(kCam.peak).epsilon(1e-6));
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) CHECK(f.at(x, y) <= f.at(100, 100));
}

TEST_CASE("spot clipped outside the frame leaves it dark") {
    const Frame f = render_frame(kCam, 1.0, 1.0);
    for (float p : f.pixels) CHECK(p == 0.0f);
    CHECK_FALSE(locate_spot(f, kPipe).has_value());
}

TEST_CASE("noise is reproducible per seed") {
    RenderConfig cfg = kCam;
    cfg.noise_sigma = 2.0;
    const Frame a = render_frame(cfg, 0.01, -0.02, 42);
    const Frame b = render_frame(cfg, 0.01, -0.02, 42);
    const Frame c = render_frame(cfg, 0.01, -0.02, 43);
    CHECK(a.pixels == b.pixels);
    CHECK(a.pixels != c.pixels);
}

TEST_CASE("bilinear downscale preserves constants and rescales the grid") {
    Frame f;
    f.width = f.height = 200;
    f.px_per_m = kCam.px_per_m;
    f.pixels.assign(200 * 200, 37.5f);
    const Frame g = resize_bilinear(f, 100, 100);
    CHECK(g.width == 100);
    CHECK(g.px_per_m == doctest::Approx(kCam.px_per_m / 2.0).epsilon(1e-15));
    for (float p : g.pixels) CHECK(p == doctest::Approx(37.5f).epsilon(1e-6));
}

TEST_CASE("threshold keeps pixels above a fifth of the peak") {
    Frame f;
    f.width = 3;
    f.height = 1;
    f.px_per_m = 1.0;
    f.pixels = {10.0f, 100.0f, 21.0f};
    const auto mask = adaptive_threshold(f, 0.2);
    CHECK(mask == std::vector<std::uint8_t>{0, 1, 1});
    f.pixels = {0.0f, 0.0f, 0.0f};
    const auto dark = adaptive_threshold(f, 0.2);
    CHECK(dark == std::vector<std::uint8_t>{0, 0, 0});
}

TEST_CASE("opening removes speckle but keeps compact blobs") {
    const int w = 9, h = 9;
    std::vector<std::uint8_t> mask(w * h, 0);
    mask[1 * w + 1] = 1;  // lone pixel
    for (int y = 4; y <= 6; ++y)
        for (int x = 4; x <= 6; ++x) mask[y * w + x] = 1;  // 3x3 block
    const auto opened = morph_open(mask, w, h, 1);
    CHECK(opened[1 * w + 1] == 0);
    int block = 0;
    for (int y = 4; y <= 6; ++y)
        for (int x = 4; x <= 6; ++x) block += opened[y * w + x];
    CHECK(block == 9);
    CHECK(morph_open(mask, w, h, 0) == mask);
}

TEST_CASE("blob detection picks the heaviest 8-connected component") {
    Frame f;
    f.width = 10;
    f.height = 5;
    f.px_per_m = 1.0;
    f.pixels.assign(50, 0.0f);
    std::vector<std::uint8_t> mask(50, 0);
    // Diagonal chain: one component under 8-connectivity, area 4.
    for (int i = 0; i < 4; ++i) {
        f.at(i, i % 5) = 10.0f;
        mask[(i % 5) * 10 + i] = 1;
    }
    // Heavier 2x2 blob, area 4.
    for (int y = 1; y <= 2; ++y)
        for (int x = 7; x <= 8; ++x) {
            f.at(x, y) = 50.0f;
            mask[y * 10 + x] = 1;
        }
    const auto blob = detect_blob(f, mask, 4);
    REQUIRE(blob.has_value());
    CHECK(blob->area == 4);
    CHECK(blob->cx == doctest::Approx(7.5).epsilon(1e-12));
    CHECK(blob->cy == doctest::Approx(1.5).epsilon(1e-12));

    // Raising min_area above both components finds nothing.
    CHECK_FALSE(detect_blob(f, mask, 5).has_value());
}

TEST_CASE("full pipeline recovers sub-pixel spot positions") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(-0.09, 0.09);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double cx = pos(rng), cy = pos(rng);
        const auto loc = locate_spot(render_frame(kCam, cx, cy), kPipe);
        REQUIRE(loc.has_value());
        worst = std::max({worst, std::abs(loc->x - cx), std::abs(loc->y - cy)});
    }
    // Working resolution is 2.4 mm/px; stay well inside one pixel.
    CHECK(worst < 0.0012);
}

TEST_CASE("pipeline reports the measurement in working-resolution pixels") {
    const auto loc = locate_spot(render_frame(kCam, 0.0, 0.0), kPipe);
    REQUIRE(loc.has_value());
    CHECK(loc->px_x == doctest::Approx(49.5).epsilon(1e-3));
    CHECK(loc->px_y == doctest::Approx(49.5).epsilon(1e-3));
    CHECK(loc->area >= kPipe.min_area);
}

TEST_CASE("graymap files round-trip through both encodings") {
    const Frame f = render_frame(kCam, 0.01, 0.01);
    const auto dir = std::filesystem::temp_directory_path() / "watrack_pgm_test";
    std::filesystem::create_directories(dir);
    const std::string p5 = (dir / "spot_p5.pgm").string();
    const std::string p2 = (dir / "spot_p2.pgm").string();
    write_pgm(f, p5, true);
    write_pgm(f, p2, false);

    std::ifstream bin(p5, std::ios::binary);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    bin >> magic >> w >> h >> maxval;
    CHECK(magic == "P5");
    CHECK(w == f.width);
    CHECK(h == f.height);
    CHECK(maxval == 255);
    bin.get();  // single separator after the header
    std::vector<char> data(static_cast<std::size_t>(w) * h);
    bin.read(data.data(), static_cast<std::streamsize>(data.size()));
    CHECK(bin.gcount() == static_cast<std::streamsize>(data.size()));

    std::ifstream txt(p2);
    txt >> magic >> w >> h >> maxval;
    CHECK(magic == "P2");
    long long sum = 0;
    int v = 0, count = 0;
    while (txt >> v) {
        sum += v;
        ++count;
    }
    CHECK(count == f.width * f.height);
    CHECK(sum > 0);
    std::filesystem::remove_all(dir);
}
