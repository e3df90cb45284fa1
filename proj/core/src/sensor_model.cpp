#include "orf/sensor_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orf/errors.hpp"

namespace orf {

void SensorPhysics::validate() const {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigurationError("must be positive", field);
    };
    positive(channel_radius_mm, "sensor.channel_radius_mm");
    positive(alpha_v_per_K, "sensor.alpha_v_per_K");
    positive(tank_volume_mm3, "sensor.tank_volume_mm3");
    positive(max_level_mm, "sensor.max_level_mm");
    positive(ref_temperature_C, "sensor.ref_temperature_C");
    positive(level_step_mm, "sensor.level_step_mm");
    const double steps = max_level_mm / level_step_mm;
    if (std::abs(steps - std::round(steps)) > 1e-9) {
        throw ConfigurationError("max_level_mm must be a whole number of level steps",
                                 "sensor.max_level_mm");
    }
}

double sensitivity_C_per_mm(const SensorPhysics& physics) {
    const double section_mm2 = std::numbers::pi * physics.channel_radius_mm * physics.channel_radius_mm;
    return section_mm2 / (physics.alpha_v_per_K * physics.tank_volume_mm3);
}

double temperature_from_level(const SensorPhysics& physics, double level_mm) {
    if (!(level_mm >= 0.0) || level_mm > physics.max_level_mm + 1e-12) {
        throw DegenerateInput("liquid-metal level outside the channel");
    }
    return physics.ref_temperature_C + sensitivity_C_per_mm(physics) * level_mm;
}

double level_from_temperature(const SensorPhysics& physics, double temperature_C) {
    const double level = (temperature_C - physics.ref_temperature_C) / sensitivity_C_per_mm(physics);
    if (!(level >= -1e-12) || level > physics.max_level_mm + 1e-12) {
        throw DegenerateInput("temperature outside the sensor's measurement range");
    }
    return std::clamp(level, 0.0, physics.max_level_mm);
}

double full_scale_range_C(const SensorPhysics& physics) {
    return sensitivity_C_per_mm(physics) * physics.max_level_mm;
}

double quantization_precision_C(const SensorPhysics& physics) {
    return sensitivity_C_per_mm(physics) * physics.level_step_mm;
}

double modulation_loss_db(const SensorPhysics& physics, double level_mm, double slope_db_per_mm) {
    if (!(level_mm >= 0.0) || level_mm > physics.max_level_mm + 1e-12) {
        throw DegenerateInput("liquid-metal level outside the channel");
    }
    if (!(slope_db_per_mm >= 0.0)) {
        throw DegenerateInput("modulation slope must be non-negative");
    }
    return slope_db_per_mm * level_mm;
}

void SensorAntenna::validate() const {
    auto beamwidth = [](double v, const char* field) {
        if (!(v > 0.0 && v < 180.0)) throw ConfigurationError("beamwidth must lie in (0, 180)", field);
    };
    beamwidth(azimuth_hpbw_deg, "sensor.azimuth_hpbw_deg");
    beamwidth(elevation_hpbw_deg, "sensor.elevation_hpbw_deg");
    if (std::abs(boresight.norm() - 1.0) > 1e-9) {
        throw ConfigurationError("boresight must be a unit vector", "sensor.boresight_azimuth_deg");
    }
}

double gaussian_beam_gain_db(const RelativeAngles& offset, double az_hpbw_deg, double el_hpbw_deg) {
    const double a = 2.0 * offset.azimuth_deg / az_hpbw_deg;
    const double e = 2.0 * offset.elevation_deg / el_hpbw_deg;
    return std::max(-3.0 * a * a - 3.0 * e * e, kBackLobeFloorDb);
}

AspectGain aspect_gain_db(const SensorAntenna& antenna, const Vec3& line_of_sight) {
    const OrientedFrame frame = OrientedFrame::from_boresight(antenna.boresight);
    const Vec3 los = line_of_sight.normalized();
    if (!frame.in_front(los)) {
        return {kBackLobeFloorDb, true};
    }
    const RelativeAngles offset = frame.relative_angles(los);
    return {gaussian_beam_gain_db(offset, antenna.azimuth_hpbw_deg, antenna.elevation_hpbw_deg), false};
}

}  // namespace orf
