#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <vector>

#include "orf/geometry.hpp"
#include "orf/sensor_model.hpp"

namespace orf {

/// Webcam with square pixels and an angle-proportional projection: one
/// degree off-axis moves the image point by width_px / hfov_deg pixels in
/// either direction.
struct CameraModel {
    int width_px{640};
    int height_px{480};
    double frame_rate_hz{1.0};
    double hfov_deg{60.0};

    void validate() const;

    double pixels_per_degree() const { return static_cast<double>(width_px) / hfov_deg; }
    double vfov_deg() const { return hfov_deg * static_cast<double>(height_px) / static_cast<double>(width_px); }
    double frame_period_s() const { return 1.0 / frame_rate_hz; }
};

struct Rgb {
    std::uint8_t r{0};
    std::uint8_t g{0};
    std::uint8_t b{0};

    bool operator==(const Rgb&) const = default;
};

struct Hsv {
    double h{0.0};  ///< degrees, [0, 360)
    double s{0.0};  ///< [0, 1]
    double v{0.0};  ///< [0, 1]
};

Hsv rgb_to_hsv(Rgb pixel);
Rgb hsv_to_rgb(const Hsv& hsv);

struct Frame {
    int width{0};
    int height{0};
    std::vector<Rgb> pixels;  ///< row-major, row 0 at the top
    double timestamp_s{0.0};

    Rgb& at(int u, int v) { return pixels[static_cast<std::size_t>(v) * width + u]; }
    const Rgb& at(int u, int v) const { return pixels[static_cast<std::size_t>(v) * width + u]; }
};

/// Continuous image coordinates: pixel (i, j) covers [i, i+1) x [j, j+1).
struct PixelPoint {
    double u{0.0};
    double v{0.0};
};

/// Image point of `world_point` for a camera looking along `mount`; nullopt
/// (out of view) when the point is behind the camera or projects outside
/// the image.
std::optional<PixelPoint> project_to_pixel(const CameraModel& camera, const MountAngles& mount,
                                           const Vec3& world_point);

/// Colored rectangular label on the sensor, facing the camera.
struct LabelSpec {
    double width_m{0.08};
    double height_m{0.06};
    Rgb color{220, 24, 32};
    Rgb background{92, 104, 98};
};

/// Additive per-channel Gaussian pixel noise.
struct PixelNoise {
    double sigma{0.0};  ///< RGB counts
    std::mt19937_64* rng{nullptr};
};

Frame render_frame(const CameraModel& camera, const MountAngles& mount, const SensorState& sensor,
                   const LabelSpec& label, const PixelNoise& noise = {}, double timestamp_s = 0.0);

struct HsvThresholds {
    double hue_min_deg{350.0};  ///< hue_min > hue_max selects a range wrapping through 0°
    double hue_max_deg{10.0};
    double sat_min{0.5};
    double sat_max{1.0};
    double val_min{0.3};
    double val_max{1.0};

    void validate() const;
    bool contains(const Hsv& hsv) const;
};

/// Inclusive pixel-index bounds.
struct BoundingBox {
    int u_min{0};
    int v_min{0};
    int u_max{0};
    int v_max{0};
};

struct Detection {
    BoundingBox bbox;
    PixelPoint centroid;  ///< pixel-mass centre of the component (U_L, V_L)
    double offset_u{0.0};  ///< ΔU = U_L - width/2
    double offset_v{0.0};  ///< ΔV = V_L - height/2
    int area_px{0};
};

/// Threshold in HSV, keep the largest 4-connected component and report its
/// bounding box and centroid. nullopt when nothing passes or the component is
/// smaller than `min_area_px`.
std::optional<Detection> detect_label(const Frame& frame, const HsvThresholds& thresholds, int min_area_px = 4);

/// Degrees per pixel used to turn image offsets into mount corrections.
struct ServoGains {
    double pan_deg_per_px{0.0};
    double tilt_deg_per_px{0.0};

    /// Gains matching the camera's projection scale.
    static ServoGains matched(const CameraModel& camera);
};

/// Linear pixel-offset to angle map. A positive ΔV (target below centre)
/// yields a negative tilt correction.
MountAngles offsets_to_angles(double offset_u, double offset_v, const ServoGains& gains);

/// Binary PPM (P6) dump of a frame. Throws IoError on failure.
void write_ppm(const Frame& frame, const std::filesystem::path& path);

}  // namespace orf
