#include "watrack/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace watrack {

double adapt_gain(AxisControllerState& st, double spot_pos, double target_pos) {
    const ControllerTuning& tn = st.tuning;
    const double d = spot_pos - target_pos;
    if (d * st.d_prev < 0.0) {
        if (std::abs(d) > tn.p1 && std::abs(st.d_prev) > tn.p1) st.s -= tn.alpha;
    } else if (std::abs(d) > tn.p2 && std::abs(st.d_prev) > tn.p2) {
        st.s += tn.alpha;
    }
    if (st.s < 1.0) {
        st.s = 1.0;
    } else if (st.s > tn.q) {
        st.s -= tn.alpha;
    }
    st.d_prev = d;
    return st.s * tn.k;
}

double pid_command(AxisControllerState& st, double d, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("control interval must be > 0");
    const ControllerTuning& tn = st.tuning;
    const double deriv = (d - st.d_prev_pid) / dt;
    st.integ = std::clamp(st.integ + d * dt, -tn.integ_max, tn.integ_max);
    const double delta = -(st.s * tn.k * d + tn.k_i * st.integ + tn.k_d * deriv);
    st.d_prev_pid = d;
    return delta;
}

void command_mirror(MirrorState& m, double tilt_x, double tilt_y, double now) {
    m.pending = true;
    m.pending_x = std::clamp(tilt_x, -m.limit, m.limit);
    m.pending_y = std::clamp(tilt_y, -m.limit, m.limit);
    m.apply_at = now + m.settle;
}

void mirror_advance(MirrorState& m, double t) {
    if (t < m.last_t)
        throw std::invalid_argument("mirror time went backwards: " +
                                    std::to_string(t) + " < " +
                                    std::to_string(m.last_t));
    m.last_t = t;
    if (m.pending && t >= m.apply_at) {
        m.tilt_x = m.pending_x;
        m.tilt_y = m.pending_y;
        m.pending = false;
    }
}

}  // namespace watrack
