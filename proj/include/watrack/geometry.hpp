// Refraction geometry for a beam crossing a dynamic water-air interface:
// lateral spot displacement, spot speed under a tilting surface, surface
// normals from slopes, and the inverse problem (slopes from an observed
// displacement).
#pragma once

#include <stdexcept>
#include <vector>

namespace watrack {

// Beam leaves the water surface only while n_water * sin(gamma) < 1.
struct TotalInternalReflection : std::domain_error {
    explicit TotalInternalReflection(double gamma);
    double gamma;
};

// An observed displacement with no pre-critical surface slope producing it.
struct NonInvertibleOffset : std::domain_error {
    explicit NonInvertibleOffset(double offset);
    double offset;
};

struct GeometryConstants {
    double depth = 1.83;         // transmitter depth below the surface [m]
    double n_water = 1.33;       // water/air refractive-index ratio
    double lever = 1.97;         // optical path, steering mirror to surface [m]
};

// Largest bottom-incidence angle with a refracted (non-reflected) exit ray.
double critical_angle(const GeometryConstants& c);

// Lateral displacement [m] of the refracted spot when the local surface
// slope tilts the incidence angle to gamma [rad]. Odd in gamma; throws
// TotalInternalReflection outside the refracting domain.
double refract_displacement(double gamma, const GeometryConstants& c);

// Rate of change [m/s] of the displacement when the incidence angle moves
// at gamma_rate [rad/s] through the value gamma.
double spot_speed(double gamma, double gamma_rate, const GeometryConstants& c);

// Unit surface normal for a surface height field with gradient (fx, fy).
struct Normal {
    double x, y, z;
};
Normal surface_normal(double fx, double fy);

// Angle [rad] between two unit normals, clamped against rounding.
double slope_change(const Normal& a, const Normal& b);

// Per-axis surface state: height-field gradient and the matching
// incidence-angle perturbation (gamma = atan(slope)).
struct SlopeState {
    double fx = 0.0, fy = 0.0;
    double gamma_x = 0.0, gamma_y = 0.0;
};
SlopeState slopes_from_gradient(double fx, double fy);

// Inverse of refract_displacement per axis: recover the surface slopes that
// displace the spot by (dx, dy). Bisection on the monotone branch; throws
// NonInvertibleOffset when |d| exceeds the pre-critical range.
SlopeState slopes_from_offset(double dx, double dy, const GeometryConstants& c);

// Receiver-plane beam position: mirror tilt steers the beam by twice the
// tilt angle over the lever arm, then the surface slopes displace the spot.
struct PlanePoint {
    double x, y;
};
PlanePoint beam_to_plane(double tilt_x, double tilt_y, const SlopeState& s,
                         const GeometryConstants& c);

}  // namespace watrack
