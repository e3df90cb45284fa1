#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "orf/geometry.hpp"
#include "orf/optical.hpp"
#include "orf/pantilt.hpp"
#include "orf/radar_fmcw.hpp"
#include "orf/sensor_model.hpp"

namespace orf {

/// What the readout side assumes about the radar, the sensor and the clutter.
/// By default this is the simulator's own forward model (matched model);
/// `pattern_error_deg` yaws the assumed sensor boresight to study mismatch.
struct ReadoutModel {
    ChirpConfig radar{};
    SensorPhysics physics{};
    SensorAntenna antenna{};
    LinkBudget link{};
    ClutterModel clutter{};
    Window window{Window::hann};
    double echo_sigma_db{0.4};
    double pattern_error_deg{0.0};
    /// Echo allowance below the last calibration point before the sensor is
    /// declared undetectable. Defaults to half the last calibration step.
    std::optional<double> undetectable_margin_db;

    SensorAntenna assumed_antenna() const;
};

struct CalibrationPoint {
    double level_mm{0.0};
    double temperature_C{0.0};
    double echo_db{0.0};
};

/// Echo level against temperature for a motionless sensor at a fixed
/// reference position, with the radar pointed straight at it.
struct CalibrationCurve {
    Vec3 reference_position{};
    std::vector<CalibrationPoint> points;

    /// Throws ConfigurationError unless there are >= 2 points with strictly
    /// increasing temperatures and strictly decreasing echoes.
    void validate() const;

    SphericalPose reference_pose() const { return cartesian_to_spherical(reference_position); }
    double max_echo_db() const { return points.front().echo_db; }
    double min_echo_db() const { return points.back().echo_db; }
    /// Δe: echo drop from the coldest to the hottest calibration point.
    double dynamic_range_db() const { return max_echo_db() - min_echo_db(); }
};

/// Radar pointing straight at `position`.
MountAngles pointing_at(const Vec3& position);

/// Expected (noise-free) measured echo of a sensor, including the clutter
/// power that shares the echo's spectral bins.
double expected_measured_echo_db(const ReadoutModel& model, const SensorState& sensor,
                                 const MountAngles& radar_pointing);

/// One calibration point per level using the noise-free forward model.
/// Throws ConfigurationError when the resulting curve is not monotone.
CalibrationCurve build_calibration(const Vec3& reference_position, const ReadoutModel& model,
                                   std::span<const double> levels_mm);

/// Levels 0, step, 2·step, ... up to and including `max_level_mm`.
std::vector<double> level_sweep(double max_level_mm, double step_mm);

struct TemperatureEstimate {
    double temperature_C{0.0};
    double sigma_C{0.0};
};

struct MeasuredGeometry {
    Vec3 sensor_position{};      ///< optical direction combined with radar range
    MountAngles radar_pointing{};
};

/// Normalizes the echo to the calibration geometry, then inverts the
/// piecewise-linear calibration curve. nullopt means undetectable (echo lost
/// in the clutter or below the curve by more than the margin). Throws
/// OutOfCalibration when the echo exceeds the curve maximum by more than 3σ.
std::optional<TemperatureEstimate> estimate_temperature(double echo_db, const MeasuredGeometry& measured,
                                                        const CalibrationCurve& calibration,
                                                        const ReadoutModel& model);

struct FusionConfig {
    CameraModel camera{};
    LabelSpec label{};
    double pixel_noise_sigma{4.0};
    HsvThresholds thresholds{};
    int min_area_px{4};
    std::optional<ServoGains> gains;  ///< matched to the camera when unset

    Window window{Window::hann};
    std::size_t min_bin{2};
    int chirps_per_cycle{64};
    double detection_margin_db{3.0};
    MountAngles radar_boresight_offset{};  ///< radar axis relative to the camera axis

    double tick_s{0.015};

    void validate() const;
    ServoGains servo_gains() const { return gains.value_or(ServoGains::matched(camera)); }
};

enum class CycleStatus { ok, not_found, undetectable, out_of_calibration };

const char* to_string(CycleStatus status);

struct RadarMeasurement {
    double beat_hz{0.0};
    double range_m{0.0};
    double echo_db{0.0};   ///< band level around the peak
    double peak_db{0.0};
    double floor_db{0.0};  ///< per-bin clutter estimate
};

struct ControlCycleResult {
    double t_s{0.0};
    CycleStatus status{CycleStatus::not_found};
    std::optional<Detection> detection;
    MountAngles commanded_offsets{};
    std::optional<MountAngles> commanded_direction;  ///< mount target set from the detection
    MountAngles radar_pointing{};  ///< actual beam direction during the burst
    /// Commanded mount direction and radar range; present with `radar`.
    std::optional<SphericalPose> estimated_pose;
    std::optional<RadarMeasurement> radar;
    std::optional<TemperatureEstimate> temperature;
};

struct CycleRandom {
    std::mt19937_64 camera;
    std::mt19937_64 radar;
};

/// The per-frame loop: render and detect, steer the mount by the pixel
/// offsets, fire a chirp burst along the radar axis, then read range, echo
/// and temperature.
class FusionController {
public:
    FusionController(FusionConfig config, ReadoutModel model, CalibrationCurve calibration);

    const FusionConfig& config() const { return config_; }
    const ReadoutModel& model() const { return model_; }
    const CalibrationCurve& calibration() const { return calibration_; }

    /// Runs one cycle at time `t_s` and advances `mount` by one tick. On a
    /// missed detection the mount keeps its last command and no radar
    /// measurement is made. Library errors are rethrown as CycleError with
    /// the original nested. When `frame_out` is set the rendered frame is
    /// copied there.
    ControlCycleResult control_cycle(const SensorState& sensor, PanTiltState& mount, double t_s,
                                     CycleRandom& random, Frame* frame_out = nullptr) const;

    /// One chirp burst with the radar beam at `radar_pointing`. Returns
    /// nullopt when the peak does not clear the floor by the detection margin.
    std::optional<RadarMeasurement> measure(const SensorState& sensor, const MountAngles& radar_pointing,
                                            std::mt19937_64& rng) const;

private:
    ControlCycleResult run_cycle(const SensorState& sensor, PanTiltState& mount, double t_s, CycleRandom& random,
                                 Frame* frame_out) const;

    FusionConfig config_;
    ReadoutModel model_;
    CalibrationCurve calibration_;
};

}  // namespace orf
