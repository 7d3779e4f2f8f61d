#include "watrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace watrack {

TotalInternalReflection::TotalInternalReflection(double g)
    : std::domain_error("incidence angle " + std::to_string(g) +
                        " rad is beyond the critical angle"),
      gamma(g) {}

NonInvertibleOffset::NonInvertibleOffset(double d)
    : std::domain_error("offset " + std::to_string(d) +
                        " m exceeds the pre-critical displacement range"),
      offset(d) {}

double critical_angle(const GeometryConstants& c) {
    return std::asin(1.0 / c.n_water);
}

double refract_displacement(double gamma, const GeometryConstants& c) {
    const double s = c.n_water * std::sin(gamma);
    if (std::abs(s) >= 1.0) throw TotalInternalReflection(gamma);
    const double beta = std::asin(s);  // exit angle from the vertical
    return c.depth * std::tan(beta - gamma);
}

double spot_speed(double gamma, double gamma_rate, const GeometryConstants& c) {
    const double s = c.n_water * std::sin(gamma);
    if (std::abs(s) >= 1.0) throw TotalInternalReflection(gamma);
    const double beta = std::asin(s);
    const double sec = 1.0 / std::cos(beta - gamma);
    const double dbeta_dgamma = c.n_water * std::cos(gamma) / std::sqrt(1.0 - s * s);
    return c.depth * sec * sec * (dbeta_dgamma - 1.0) * gamma_rate;
}

Normal surface_normal(double fx, double fy) {
    const double inv = 1.0 / std::sqrt(fx * fx + fy * fy + 1.0);
    return Normal{-fx * inv, -fy * inv, inv};
}

double slope_change(const Normal& a, const Normal& b) {
    const double dot = a.x * b.x + a.y * b.y + a.z * b.z;
    return std::acos(std::clamp(dot, -1.0, 1.0));
}

SlopeState slopes_from_gradient(double fx, double fy) {
    return SlopeState{fx, fy, std::atan(fx), std::atan(fy)};
}

namespace {

// Invert d(gamma) on [0, critical) for d >= 0; the branch is monotone.
double invert_axis(double d, const GeometryConstants& c) {
    if (d == 0.0) return 0.0;
    const double target = std::abs(d);
    // Stay strictly inside the refracting domain at the upper bracket.
    const double hi0 = critical_angle(c) * (1.0 - 1e-9);
    if (target >= refract_displacement(hi0, c)) throw NonInvertibleOffset(d);
    double lo = 0.0, hi = hi0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (refract_displacement(mid, c) < target ? lo : hi) = mid;
    }
    const double g = 0.5 * (lo + hi);
    return d > 0.0 ? g : -g;
}

}  // namespace

SlopeState slopes_from_offset(double dx, double dy, const GeometryConstants& c) {
    const double gx = invert_axis(dx, c);
    const double gy = invert_axis(dy, c);
    return SlopeState{std::tan(gx), std::tan(gy), gx, gy};
}

PlanePoint beam_to_plane(double tilt_x, double tilt_y, const SlopeState& s,
                         const GeometryConstants& c) {
    return PlanePoint{
        c.lever * 2.0 * tilt_x + refract_displacement(s.gamma_x, c),
        c.lever * 2.0 * tilt_y + refract_displacement(s.gamma_y, c),
    };
}

}  // namespace watrack
