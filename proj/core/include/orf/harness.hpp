#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "orf/fusion_controller.hpp"
#include "orf/scenario_config.hpp"

namespace orf {

/// One control cycle as written to a trace file.
struct TraceRecord {
    double t_s{0.0};
    SphericalPose truth{};
    MountAngles mount{};  ///< after the cycle's mount step
    ControlCycleResult cycle{};
};

struct LevelSummary {
    double level_mm{0.0};
    double temperature_C{0.0};
    std::optional<double> max_echo_db;
    std::optional<double> azimuth_at_max_deg;  ///< true azimuth of the strongest echo
    std::optional<double> range_at_max_m;      ///< radar range of the strongest echo
    std::optional<double> mean_temperature_C;
    std::optional<double> std_temperature_C;
    int cycles{0};
    int ok_cycles{0};
};

struct LevelRun {
    double level_mm{0.0};
    std::vector<TraceRecord> trace;
    LevelSummary summary;
};

struct RunOptions {
    /// Frames are written as PPM files under <output_dir>/frames when set.
    bool dump_frames{false};
    /// Skip writing files and just return the runs.
    bool write_files{true};
};

/// Capture times of the camera frames covering one traverse: n / frame rate
/// for every n with t <= traverse time.
std::vector<double> frame_times(const ScenarioConfig& cfg);

/// Peak pan and tilt rates needed to keep the sensor's bearing on boresight
/// during the traverse, sampled at the simulation tick.
MountAngles required_slew_dps(const ScenarioConfig& cfg);

/// Simulates one traverse at `cfg.levels_mm[level_index]`. The random streams
/// are seeded from cfg.seed + level_index. `frames_dir` enables PPM dumps.
LevelRun simulate_level(const ScenarioConfig& cfg, const FusionController& controller, std::size_t level_index,
                        const std::optional<std::filesystem::path>& frames_dir = std::nullopt);

/// Runs every configured level and, unless disabled, writes
/// trace_level_<mm>.csv and summary.csv into cfg.output_dir. Throws IoError
/// when the directory cannot be created or written.
std::vector<LevelRun> run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

/// Writes calibration.csv into cfg.output_dir and returns the curve.
CalibrationCurve run_calibration(const ScenarioConfig& cfg);

std::string trace_file_name(double level_mm);
std::string trace_csv(const LevelRun& run);
std::string summary_csv(const std::vector<LevelRun>& runs);

/// Calibration CSV: a '#' line with the reference geometry, a header row,
/// then one row per level.
std::string calibration_csv(const CalibrationCurve& curve);
CalibrationCurve parse_calibration_csv(const std::string& text);
CalibrationCurve load_calibration_csv(const std::filesystem::path& path);

/// Spectrum of a single chirp for an aligned sensor at `range_m`, as
/// `bin_hz,magnitude_db` rows.
std::string spectrum_csv(const ScenarioConfig& cfg, double range_m, double level_mm);

}  // namespace orf
