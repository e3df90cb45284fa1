#include "orf/pantilt.hpp"

#include <algorithm>
#include <cmath>

#include "orf/errors.hpp"

namespace orf {

namespace {

struct Axis {
    double position;
    double carry;
};

Axis advance_axis(double position, double target, double carry, double speed, double dt, double quantum) {
    const double budget = speed * dt;
    const double remaining = target - position;
    if (std::abs(remaining) <= budget) {
        return {quantize(target, quantum), 0.0};
    }
    const double goal = quantize(target, quantum);
    const double grid_distance = std::abs(goal - position);
    const double available = budget + carry;
    // Never move more than speed·dt + quantum/2 in one step.
    const double cap = std::floor((budget + quantum / 2.0) / quantum + 1e-9) * quantum;
    double move = std::min(std::round(available / quantum) * quantum, cap);
    move = std::clamp(move, 0.0, grid_distance);
    const double next_carry = std::clamp(available - move, -quantum / 2.0, quantum / 2.0);
    const double direction = remaining > 0.0 ? 1.0 : -1.0;
    return {quantize(position + direction * move, quantum), next_carry};
}

}  // namespace

double quantize(double value, double quantum) {
    const double q = std::round(value / quantum) * quantum;
    return q == 0.0 ? 0.0 : q;  // no negative zero in traces
}

void PanTiltState::validate() const {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigurationError("must be positive", field);
    };
    positive(pan_speed_dps, "mount.pan_speed_dps");
    positive(tilt_speed_dps, "mount.tilt_speed_dps");
    positive(precision_deg, "mount.precision_deg");
    positive(pan_limit_deg, "mount.pan_limit_deg");
    if (!(tilt_limit_deg > 0.0 && tilt_limit_deg <= 90.0)) {
        throw ConfigurationError("must lie in (0, 90]", "mount.tilt_limit_deg");
    }
    if (std::abs(tilt_deg) > tilt_limit_deg + 1e-9) {
        throw ConfigurationError("initial tilt exceeds the tilt limit", "mount.initial_offset_deg");
    }
    if (std::abs(pan_deg) > pan_limit_deg + 1e-9) {
        throw ConfigurationError("initial pan exceeds the pan limit", "mount.initial_offset_deg");
    }
}

PanTiltState PanTiltState::at_rest(const PanTiltState& params, const MountAngles& angles) {
    PanTiltState s = params;
    s.pan_deg = quantize(std::clamp(angles.pan_deg, -s.pan_limit_deg, s.pan_limit_deg), s.precision_deg);
    s.tilt_deg = quantize(std::clamp(angles.tilt_deg, -s.tilt_limit_deg, s.tilt_limit_deg), s.precision_deg);
    s.target_pan_deg = s.pan_deg;
    s.target_tilt_deg = s.tilt_deg;
    s.pan_carry_deg = 0.0;
    s.tilt_carry_deg = 0.0;
    return s;
}

PanTiltState command(PanTiltState state, double d_pan_deg, double d_tilt_deg) {
    state.target_pan_deg = std::clamp(state.target_pan_deg + d_pan_deg, -state.pan_limit_deg, state.pan_limit_deg);
    state.target_tilt_deg =
        std::clamp(state.target_tilt_deg + d_tilt_deg, -state.tilt_limit_deg, state.tilt_limit_deg);
    return state;
}

PanTiltState aim(PanTiltState state, const MountAngles& target) {
    state.target_pan_deg = std::clamp(target.pan_deg, -state.pan_limit_deg, state.pan_limit_deg);
    state.target_tilt_deg = std::clamp(target.tilt_deg, -state.tilt_limit_deg, state.tilt_limit_deg);
    return state;
}

PanTiltState step(PanTiltState state, double dt_s) {
    if (!(dt_s > 0.0)) {
        throw DegenerateInput("pan-tilt step requires dt > 0");
    }
    const Axis pan = advance_axis(state.pan_deg, state.target_pan_deg, state.pan_carry_deg, state.pan_speed_dps,
                                  dt_s, state.precision_deg);
    const Axis tilt = advance_axis(state.tilt_deg, state.target_tilt_deg, state.tilt_carry_deg,
                                   state.tilt_speed_dps, dt_s, state.precision_deg);
    state.pan_deg = pan.position;
    state.pan_carry_deg = pan.carry;
    state.tilt_deg = tilt.position;
    state.tilt_carry_deg = tilt.carry;
    return state;
}

}  // namespace orf
