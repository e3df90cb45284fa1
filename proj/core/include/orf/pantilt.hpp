#pragma once

#include "orf/geometry.hpp"

namespace orf {

/// Motorized pan-tilt carrying the co-aligned camera and radar.
///
/// Motion is constant-rate with no acceleration ramp. Reported angles are
/// always whole multiples of `precision_deg`; travel shorter than one
/// quantum is carried over to the next step so the average slew rate equals
/// the configured speed.
struct PanTiltState {
    double pan_deg{0.0};
    double tilt_deg{0.0};
    double target_pan_deg{0.0};
    double target_tilt_deg{0.0};
    double pan_speed_dps{6.1};
    double tilt_speed_dps{4.6};
    double precision_deg{0.1};
    double tilt_limit_deg{60.0};
    double pan_limit_deg{170.0};
    double pan_carry_deg{0.0};
    double tilt_carry_deg{0.0};

    /// Throws ConfigurationError when an invariant is violated.
    void validate() const;

    MountAngles orientation() const { return {pan_deg, tilt_deg}; }
    MountAngles target() const { return {target_pan_deg, target_tilt_deg}; }

    /// Mount at rest at the given angles (clamped and quantized).
    static PanTiltState at_rest(const PanTiltState& params, const MountAngles& angles);
};

/// Adds relative offsets to the current target, clamped to the mount limits.
PanTiltState command(PanTiltState state, double d_pan_deg, double d_tilt_deg);

/// Replaces the target with absolute angles, clamped to the mount limits.
PanTiltState aim(PanTiltState state, const MountAngles& target);

/// Advances both axes towards their targets by at most speed·dt (plus the
/// sub-quantum carry), then snaps to the precision grid. Throws
/// DegenerateInput when dt <= 0.
PanTiltState step(PanTiltState state, double dt_s);

/// Nearest multiple of `quantum`.
double quantize(double value, double quantum);

}  // namespace orf
