// Per-axis tracking controller and steering-mirror actuation model. The
// proportional gain is scheduled by an oscillation/lag detector driven by
// the sign and size of consecutive offsets; commands take effect after a
// fixed mechanical settle time, with later commands superseding earlier ones.
#pragma once

#include <stdexcept>

namespace watrack {

struct ControllerTuning {
    double k = 0.0;           // base proportional gain [rad/m]
    double alpha = 0.1;       // gain-scale step per adaptation event
    double p1 = 0.005;        // oscillation threshold on |offset| [m]
    double p2 = 0.010;        // lag threshold on |offset| [m]
    double q = 3.0;           // upper bound for the gain scale
    double k_i = 0.0;         // integral gain [rad/(m*s)]
    double k_d = 0.0;         // derivative gain [rad*s/m]
    double integ_max = 0.1;   // integral-state clamp [m*s]
};

struct AxisControllerState {
    ControllerTuning tuning;
    double s = 1.0;           // adaptive scale on the proportional gain
    double d_prev = 0.0;      // previous offset seen by the gain scheduler
    double integ = 0.0;       // accumulated offset [m*s]
    double d_prev_pid = 0.0;  // previous offset seen by the derivative term
};

// Gain scheduler: consecutive offsets of opposite sign, both beyond p1,
// indicate overshoot and shrink the scale; same-signed offsets both beyond
// p2 indicate lag and grow it. The scale is kept in [1, q] by stepping back
// by alpha at the top and snapping to 1 at the bottom. Returns the scheduled
// proportional gain s*k and records the offset for the next call.
double adapt_gain(AxisControllerState& st, double spot_pos, double target_pos);

// Incremental tilt command [rad] for the measured offset d over a control
// interval dt: proportional (at the scheduled gain), integral, derivative.
// The integral absorbs d before the output is formed, which places the
// idealized closed-loop poles at {0, 1 - lever_gain*k_i*dt} and gives the
// fast step decay the defaults are tuned for. The sign moves the spot
// toward the target.
double pid_command(AxisControllerState& st, double d, double dt);

struct MirrorState {
    double tilt_x = 0.0, tilt_y = 0.0;     // applied tilt [rad]
    double limit = 0.047123889803846899;   // mechanical tilt range [rad]
    double settle = 0.002;                 // command-to-motion delay [s]

    bool pending = false;
    double pending_x = 0.0, pending_y = 0.0;
    double apply_at = 0.0;
    double last_t = 0.0;
};

// Queue absolute tilt targets issued at time `now`; they take effect at
// now + settle. Targets clamp to the mechanical range. A newer command
// replaces an un-applied older one (the mount tracks the latest setpoint).
void command_mirror(MirrorState& m, double tilt_x, double tilt_y, double now);

// Advance the mount to time t, applying a due command. Time must not go
// backwards across calls.
void mirror_advance(MirrorState& m, double t);

}  // namespace watrack
