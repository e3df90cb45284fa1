#pragma once

// Frame convention used throughout the library: origin at the centre of the
// pan-tilt mobile support, x to the right, y forward along the zero-pan
// boresight, z up. Azimuth is atan2(x, y) (positive to the right), elevation
// is measured from the horizontal plane. Angles cross the public API in
// degrees.

#include <cmath>
#include <numbers>

namespace orf {

constexpr double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

struct Vec3 {
    double x{0.0};
    double y{0.0};
    double z{0.0};

    constexpr Vec3 operator+(const Vec3& o) const noexcept { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const noexcept { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const noexcept { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const noexcept { return {x * s, y * s, z * s}; }
    constexpr bool operator==(const Vec3&) const = default;

    constexpr double dot(const Vec3& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const noexcept {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const noexcept { return std::sqrt(dot(*this)); }
    /// Throws DegenerateInput on a zero vector.
    Vec3 normalized() const;
};

/// Target location as seen from the mount centre (φ, θ, R).
struct SphericalPose {
    double azimuth_deg{0.0};    ///< (-180, 180]
    double elevation_deg{0.0};  ///< [-90, 90]
    double range_m{0.0};        ///< > 0
};

SphericalPose cartesian_to_spherical(const Vec3& p);
Vec3 spherical_to_cartesian(const SphericalPose& pose);

/// Pan/tilt orientation of a two-axis gimbal (pan about world z, then tilt).
struct MountAngles {
    double pan_deg{0.0};
    double tilt_deg{0.0};
};

/// Angular position of a direction relative to a rotated frame's boresight.
struct RelativeAngles {
    double azimuth_deg{0.0};
    double elevation_deg{0.0};
};

/// Orthonormal right/forward/up triad of a pan-then-tilt gimbal.
struct OrientedFrame {
    Vec3 right;
    Vec3 forward;
    Vec3 up;

    static OrientedFrame from_angles(const MountAngles& angles);
    /// Frame whose forward axis is `boresight`; right stays horizontal.
    static OrientedFrame from_boresight(const Vec3& boresight);

    /// Azimuth/elevation of `direction` measured in this frame.
    RelativeAngles relative_angles(const Vec3& direction) const;
    /// True when `direction` lies strictly in front of the frame's x-z plane.
    bool in_front(const Vec3& direction) const { return forward.dot(direction) > 0.0; }
};

/// Straight conveyor moving the sensor at constant speed.
struct ConveyorPath {
    Vec3 start_point{};
    Vec3 direction{1.0, 0.0, 0.0};
    double length_m{1.5};
    double speed_mps{0.05};

    /// Throws ConfigurationError when an invariant is violated.
    void validate() const;
    /// Time to travel the whole belt; +inf when stationary.
    double traverse_time_s() const;
};

Vec3 conveyor_position(const ConveyorPath& path, double t_s);

/// Point on the belt seen at the given azimuth in the horizontal plane
/// through the belt. Throws DegenerateInput when no such point exists.
Vec3 conveyor_point_at_azimuth(const ConveyorPath& path, double azimuth_deg);

/// First point along the belt at the given range from the origin.
Vec3 conveyor_point_at_range(const ConveyorPath& path, double range_m);

}  // namespace orf
