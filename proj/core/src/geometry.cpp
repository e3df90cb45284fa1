#include "orf/geometry.hpp"

#include <algorithm>
#include <limits>

#include "orf/errors.hpp"

namespace orf {

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DegenerateInput("cannot normalize a zero or non-finite vector");
    }
    return *this * (1.0 / n);
}

SphericalPose cartesian_to_spherical(const Vec3& p) {
    const double r = p.norm();
    if (!(r > 0.0)) {
        throw DegenerateInput("cartesian_to_spherical: point is at the origin");
    }
    double az = rad_to_deg(std::atan2(p.x, p.y));
    if (az <= -180.0) az += 360.0;
    const double el = rad_to_deg(std::atan2(p.z, std::hypot(p.x, p.y)));
    return {az, el, r};
}

Vec3 spherical_to_cartesian(const SphericalPose& pose) {
    const double az = deg_to_rad(pose.azimuth_deg);
    const double el = deg_to_rad(pose.elevation_deg);
    const double horiz = pose.range_m * std::cos(el);
    return {horiz * std::sin(az), horiz * std::cos(az), pose.range_m * std::sin(el)};
}

OrientedFrame OrientedFrame::from_angles(const MountAngles& angles) {
    const double p = deg_to_rad(angles.pan_deg);
    const double t = deg_to_rad(angles.tilt_deg);
    const double sp = std::sin(p), cp = std::cos(p), st = std::sin(t), ct = std::cos(t);
    return {
        {cp, -sp, 0.0},
        {sp * ct, cp * ct, st},
        {-sp * st, -cp * st, ct},
    };
}

OrientedFrame OrientedFrame::from_boresight(const Vec3& boresight) {
    const Vec3 f = boresight.normalized();
    Vec3 r = f.cross({0.0, 0.0, 1.0});
    if (r.norm() < 1e-12) {
        // Looking straight up or down: any horizontal right axis will do.
        r = {1.0, 0.0, 0.0};
    }
    r = r.normalized();
    return {r, f, r.cross(f)};
}

RelativeAngles OrientedFrame::relative_angles(const Vec3& direction) const {
    const double x = direction.dot(right);
    const double y = direction.dot(forward);
    const double z = direction.dot(up);
    return {rad_to_deg(std::atan2(x, y)), rad_to_deg(std::atan2(z, std::hypot(x, y)))};
}

void ConveyorPath::validate() const {
    const double n = direction.norm();
    if (std::abs(n - 1.0) > 1e-9) {
        throw ConfigurationError("direction must be a unit vector", "conveyor.direction");
    }
    if (!(length_m > 0.0)) {
        throw ConfigurationError("must be positive", "conveyor.length_m");
    }
    if (!(speed_mps >= 0.0)) {
        throw ConfigurationError("must be non-negative", "conveyor.speed_mps");
    }
}

double ConveyorPath::traverse_time_s() const {
    if (speed_mps == 0.0) return std::numeric_limits<double>::infinity();
    return length_m / speed_mps;
}

Vec3 conveyor_position(const ConveyorPath& path, double t_s) {
    if (t_s < 0.0 || !std::isfinite(t_s)) {
        throw DegenerateInput("conveyor_position: time must be finite and non-negative");
    }
    const double travelled = std::min(path.speed_mps * t_s, path.length_m);
    return path.start_point + path.direction * travelled;
}

Vec3 conveyor_point_at_azimuth(const ConveyorPath& path, double azimuth_deg) {
    const double a = deg_to_rad(azimuth_deg);
    const double ca = std::cos(a), sa = std::sin(a);
    // Points on the ray satisfy x*cos(a) - y*sin(a) = 0 with x*sin(a) + y*cos(a) > 0.
    const double denom = path.direction.x * ca - path.direction.y * sa;
    if (std::abs(denom) < 1e-12) {
        throw DegenerateInput("conveyor is parallel to the requested azimuth");
    }
    const double s = -(path.start_point.x * ca - path.start_point.y * sa) / denom;
    const Vec3 p = path.start_point + path.direction * s;
    if (s < -1e-12 || s > path.length_m + 1e-12 || p.x * sa + p.y * ca <= 0.0) {
        throw DegenerateInput("conveyor does not cross the requested azimuth");
    }
    return p;
}

Vec3 conveyor_point_at_range(const ConveyorPath& path, double range_m) {
    const double b = path.start_point.dot(path.direction);
    const double c = path.start_point.dot(path.start_point) - range_m * range_m;
    const double disc = b * b - c;
    if (disc < 0.0) {
        throw DegenerateInput("conveyor never reaches the requested range");
    }
    const double root = std::sqrt(disc);
    for (const double s : {-b - root, -b + root}) {
        if (s >= -1e-12 && s <= path.length_m + 1e-12) {
            return path.start_point + path.direction * std::max(s, 0.0);
        }
    }
    throw DegenerateInput("conveyor never reaches the requested range");
}

}  // namespace orf
