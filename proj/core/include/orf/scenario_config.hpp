#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "orf/fusion_controller.hpp"

namespace orf {

/// Where the motionless-sensor calibration is taken: the belt point seen at a
/// given azimuth, or the belt point at a given range.
struct CalibrationReference {
    enum class Kind { azimuth, range };
    Kind kind{Kind::azimuth};
    double value{0.0};

    Vec3 resolve(const ConveyorPath& path) const;
    std::string describe() const;
};

/// Calibration sweeps run from the empty channel up to this level.
inline constexpr double kCalibrationMaxLevelMm = 2.4;

struct ScenarioConfig {
    std::string id{"scenario1"};
    ConveyorPath path{};
    std::vector<double> levels_mm;
    CalibrationReference calibration{};

    ReadoutModel model{};  ///< radar, sensor physics and antenna, link, clutter
    FusionConfig fusion{};
    PanTiltState mount{};
    MountAngles initial_offset{};  ///< initial mount error relative to the sensor bearing

    std::uint64_t seed{1};
    std::filesystem::path output_dir{"out"};

    /// Checks every sub-configuration; throws ConfigurationError naming the field.
    void validate() const;

    SensorState sensor_at(double level_mm, double t_s) const;
    /// Mount at rest, pointing at the sensor's start position plus `initial_offset`.
    PanTiltState initial_mount() const;
    CalibrationCurve calibrate() const;
};

/// Built-in configurations "scenario1" and "scenario2"; nullopt for other names.
std::optional<ScenarioConfig> builtin_scenario(const std::string& name);

/// Parses a JSON scenario. Missing keys keep their defaults (the "scenario1"
/// values unless `base` names another built-in); unknown keys are rejected.
ScenarioConfig parse_scenario_json(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioConfig& cfg);

}  // namespace orf
