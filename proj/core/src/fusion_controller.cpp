#include "orf/fusion_controller.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "orf/errors.hpp"

namespace orf {

namespace {

double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

struct Segment {
    std::size_t index;  // points[index] .. points[index + 1]
    double slope_db_per_C;
};

Segment segment_at(const CalibrationCurve& curve, std::size_t index) {
    const auto& a = curve.points[index];
    const auto& b = curve.points[index + 1];
    return {index, (a.echo_db - b.echo_db) / (b.temperature_C - a.temperature_C)};
}

}  // namespace

SensorAntenna ReadoutModel::assumed_antenna() const {
    if (pattern_error_deg == 0.0) return antenna;
    const double a = deg_to_rad(pattern_error_deg);
    const Vec3& b = antenna.boresight;
    SensorAntenna out = antenna;
    out.boresight = Vec3{b.x * std::cos(a) + b.y * std::sin(a), -b.x * std::sin(a) + b.y * std::cos(a), b.z}.normalized();
    return out;
}

void CalibrationCurve::validate() const {
    if (points.size() < 2) {
        throw ConfigurationError("calibration needs at least two points", "calibration");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].temperature_C > points[i - 1].temperature_C)) {
            throw ConfigurationError("calibration temperatures must increase strictly", "calibration");
        }
        if (!(points[i].echo_db < points[i - 1].echo_db)) {
            throw ConfigurationError(
                "calibration echo does not decrease strictly with temperature (check modulation slope, "
                "antenna pattern and clutter settings)",
                "calibration");
        }
    }
}

MountAngles pointing_at(const Vec3& position) {
    const SphericalPose pose = cartesian_to_spherical(position);
    return {pose.azimuth_deg, pose.elevation_deg};
}

double expected_measured_echo_db(const ReadoutModel& model, const SensorState& sensor,
                                 const MountAngles& radar_pointing) {
    const double echo = link_echo_db(model.radar, sensor, radar_pointing, model.link);
    return expected_band_level_db(echo, model.clutter, model.window, model.radar.num_samples);
}

std::vector<double> level_sweep(double max_level_mm, double step_mm) {
    if (!(step_mm > 0.0) || !(max_level_mm >= 0.0)) {
        throw DegenerateInput("level_sweep: step must be positive and the maximum non-negative");
    }
    const auto count = static_cast<std::size_t>(std::llround(max_level_mm / step_mm)) + 1;
    std::vector<double> levels(count);
    // Snapping to 1 nm keeps 3 * 0.2 printing as 0.6.
    for (std::size_t i = 0; i < count; ++i) levels[i] = std::round(static_cast<double>(i) * step_mm * 1e6) / 1e6;
    return levels;
}

CalibrationCurve build_calibration(const Vec3& reference_position, const ReadoutModel& model,
                                   std::span<const double> levels_mm) {
    CalibrationCurve curve;
    curve.reference_position = reference_position;
    SensorState sensor{0.0, model.physics, model.antenna, reference_position};
    const MountAngles pointing = pointing_at(reference_position);
    for (const double level : levels_mm) {
        sensor.level_mm = level;
        curve.points.push_back(
            {level, temperature_from_level(model.physics, level), expected_measured_echo_db(model, sensor, pointing)});
    }
    curve.validate();
    return curve;
}

std::optional<TemperatureEstimate> estimate_temperature(double echo_db, const MeasuredGeometry& measured,
                                                        const CalibrationCurve& calibration,
                                                        const ReadoutModel& model) {
    const std::size_t n = calibration.points.size();
    const SensorAntenna antenna = model.assumed_antenna();

    // Strip the clutter power, move the echo to the calibration geometry, and
    // add the clutter back so the reading is comparable with the curve.
    double clutter_power = 0.0;
    if (model.clutter.has_floor()) {
        clutter_power = db_to_power(model.clutter.floor_db + band_noise_gain_db(model.window, model.radar.num_samples));
    }
    const double signal_power = db_to_power(echo_db) - clutter_power;
    if (!(signal_power > 0.0)) return std::nullopt;

    const double measured_gain =
        geometric_gain_db(model.radar, antenna, measured.sensor_position, measured.radar_pointing, model.link);
    const double reference_gain = geometric_gain_db(model.radar, antenna, calibration.reference_position,
                                                    pointing_at(calibration.reference_position), model.link);
    const double normalized_signal = 10.0 * std::log10(signal_power) - measured_gain + reference_gain;
    const double reading = 10.0 * std::log10(db_to_power(normalized_signal) + clutter_power);

    const double precision = quantization_precision_C(model.physics);
    auto with_sigma = [&](double temperature, const Segment& seg) {
        return TemperatureEstimate{temperature, std::max(model.echo_sigma_db / seg.slope_db_per_C, precision)};
    };

    if (reading >= calibration.max_echo_db()) {
        if (reading > calibration.max_echo_db() + 3.0 * model.echo_sigma_db) {
            throw OutOfCalibration("echo " + std::to_string(reading) + " dB exceeds the calibration maximum of " +
                                   std::to_string(calibration.max_echo_db()) + " dB");
        }
        return with_sigma(calibration.points.front().temperature_C, segment_at(calibration, 0));
    }

    const double last_step = calibration.points[n - 2].echo_db - calibration.points[n - 1].echo_db;
    const double margin = model.undetectable_margin_db.value_or(0.5 * last_step);
    if (reading <= calibration.min_echo_db()) {
        if (reading < calibration.min_echo_db() - margin) return std::nullopt;
        return with_sigma(calibration.points.back().temperature_C, segment_at(calibration, n - 2));
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto& a = calibration.points[i];
        const auto& b = calibration.points[i + 1];
        if (reading <= a.echo_db && reading >= b.echo_db) {
            const double frac = (a.echo_db - reading) / (a.echo_db - b.echo_db);
            return with_sigma(a.temperature_C + frac * (b.temperature_C - a.temperature_C), segment_at(calibration, i));
        }
    }
    return std::nullopt;  // unreachable for a validated curve
}

void FusionConfig::validate() const {
    camera.validate();
    thresholds.validate();
    if (!(pixel_noise_sigma >= 0.0)) throw ConfigurationError("must be non-negative", "camera.noise_sigma");
    if (min_area_px < 1) throw ConfigurationError("must be at least 1", "detection.min_area_px");
    if (chirps_per_cycle < 1) throw ConfigurationError("must be at least 1", "radar.chirps_per_cycle");
    if (min_bin < 1) throw ConfigurationError("must exclude the DC bin", "radar.min_bin");
    if (!(tick_s > 0.0)) throw ConfigurationError("must be positive", "simulation.tick_s");
    if (tick_s > camera.frame_period_s()) {
        throw ConfigurationError("tick must not exceed the camera frame period", "simulation.tick_s");
    }
}

const char* to_string(CycleStatus status) {
    switch (status) {
        case CycleStatus::ok: return "OK";
        case CycleStatus::not_found: return "NotFound";
        case CycleStatus::undetectable: return "Undetectable";
        case CycleStatus::out_of_calibration: return "OutOfCalibration";
    }
    return "?";
}

FusionController::FusionController(FusionConfig config, ReadoutModel model, CalibrationCurve calibration)
    : config_(std::move(config)), model_(std::move(model)), calibration_(std::move(calibration)) {
    config_.validate();
    model_.radar.validate();
    calibration_.validate();
}

ControlCycleResult FusionController::control_cycle(const SensorState& sensor, PanTiltState& mount, double t_s,
                                                   CycleRandom& random, Frame* frame_out) const {
    try {
        return run_cycle(sensor, mount, t_s, random, frame_out);
    } catch (const Error& e) {
        std::throw_with_nested(CycleError(t_s, e.what()));
    }
}

std::optional<RadarMeasurement> FusionController::measure(const SensorState& sensor,
                                                          const MountAngles& radar_pointing,
                                                          std::mt19937_64& rng) const {
    // Chirp burst: each chirp sees the same geometry with a fresh carrier phase.
    const double echo_level = link_echo_db(model_.radar, sensor, radar_pointing, model_.link);
    const double true_range = sensor.position.norm();
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<BeatSpectrum> spectra;
    spectra.reserve(static_cast<std::size_t>(config_.chirps_per_cycle));
    for (int c = 0; c < config_.chirps_per_cycle; ++c) {
        const EchoTarget target{true_range, echo_level, phase(rng)};
        const auto samples = synthesize_beat(model_.radar, std::span(&target, 1), model_.clutter, rng);
        spectra.push_back(beat_spectrum(model_.radar, samples, config_.window));
    }
    const BeatSpectrum spectrum = average_spectra(spectra);

    const SpectralPeak peak = peak_beat_frequency(spectrum, config_.min_bin);
    const double floor = noise_floor_db(spectrum, peak.bin, config_.min_bin);
    if (peak.level_db < floor + config_.detection_margin_db) return std::nullopt;

    RadarMeasurement radar;
    radar.beat_hz = peak.frequency_hz;
    radar.range_m = range_from_beat(model_.radar, peak.frequency_hz);
    radar.echo_db = band_level_db(spectrum, peak.bin);
    radar.peak_db = peak.level_db;
    radar.floor_db = floor;
    return radar;
}

ControlCycleResult FusionController::run_cycle(const SensorState& sensor, PanTiltState& mount, double t_s,
                                               CycleRandom& random, Frame* frame_out) const {
    ControlCycleResult result;
    result.t_s = t_s;

    const MountAngles seen_from = mount.orientation();
    Frame frame = render_frame(config_.camera, seen_from, sensor, config_.label,
                               PixelNoise{config_.pixel_noise_sigma, &random.camera}, t_s);
    result.detection = detect_label(frame, config_.thresholds, config_.min_area_px);
    if (frame_out != nullptr) *frame_out = std::move(frame);

    if (!result.detection) {
        mount = step(mount, config_.tick_s);
        result.radar_pointing = mount.orientation();
        result.status = CycleStatus::not_found;
        return result;
    }

    result.commanded_offsets =
        offsets_to_angles(result.detection->offset_u, result.detection->offset_v, config_.servo_gains());
    const MountAngles optical_direction{seen_from.pan_deg + result.commanded_offsets.pan_deg,
                                        seen_from.tilt_deg + result.commanded_offsets.tilt_deg};
    // Offsets are measured from where the camera was looking, which lags the
    // target while the mount is still slewing.
    mount = aim(mount, optical_direction);
    result.commanded_direction = mount.target();
    mount = step(mount, config_.tick_s);

    result.radar_pointing = {mount.pan_deg + config_.radar_boresight_offset.pan_deg,
                             mount.tilt_deg + config_.radar_boresight_offset.tilt_deg};

    const auto radar = measure(sensor, result.radar_pointing, random.radar);
    if (!radar) {
        result.status = CycleStatus::undetectable;
        return result;
    }
    result.radar = radar;
    result.estimated_pose = SphericalPose{mount.target_pan_deg, mount.target_tilt_deg, radar->range_m};

    const Vec3 position_estimate =
        spherical_to_cartesian({optical_direction.pan_deg, optical_direction.tilt_deg, radar->range_m});
    try {
        result.temperature = estimate_temperature(radar->echo_db, {position_estimate, result.radar_pointing},
                                                  calibration_, model_);
        result.status = result.temperature ? CycleStatus::ok : CycleStatus::undetectable;
    } catch (const OutOfCalibration&) {
        result.status = CycleStatus::out_of_calibration;
    }
    return result;
}

}  // namespace orf
