#pragma once

#include "orf/geometry.hpp"

namespace orf {

/// Galinstan-filled microfluidic channel. Thermal expansion of the liquid metal
/// in the tank pushes it along the channel; the filled length sets the
/// transmission of the sensor's cavity and hence its radar echo.
struct SensorPhysics {
    double channel_radius_mm{0.25};
    double alpha_v_per_K{11.5e-5};  ///< volumetric expansion coefficient
    double tank_volume_mm3{100.0};
    double max_level_mm{3.6};
    double ref_temperature_C{20.0};  ///< temperature at level 0
    double level_step_mm{0.2};       ///< readout quantization

    void validate() const;
};

/// ΔT/Δl = π r² / (α_v V₀), in °C per mm of liquid-metal displacement.
double sensitivity_C_per_mm(const SensorPhysics& physics);

/// Throws DegenerateInput when the level is outside [0, max_level_mm].
double temperature_from_level(const SensorPhysics& physics, double level_mm);
double level_from_temperature(const SensorPhysics& physics, double temperature_C);

/// Temperature span covered by the full channel.
double full_scale_range_C(const SensorPhysics& physics);

/// Temperature equivalent of one level quantization step (the readout precision).
double quantization_precision_C(const SensorPhysics& physics);

/// Echo attenuation caused by the liquid metal, linear in dB with the fill level.
double modulation_loss_db(const SensorPhysics& physics, double level_mm, double slope_db_per_mm);

/// Sensor horn pattern. Both horns of the sensor share this pattern and boresight.
struct SensorAntenna {
    double azimuth_hpbw_deg{62.0};
    double elevation_hpbw_deg{50.0};
    Vec3 boresight{0.0, -1.0, 0.0};

    void validate() const;
};

inline constexpr double kBackLobeFloorDb = -40.0;

/// Gaussian main lobe: -3·(2Δaz/HPBW_az)² - 3·(2Δel/HPBW_el)² dB, floored at
/// kBackLobeFloorDb. Shared by the sensor and radar antenna models.
double gaussian_beam_gain_db(const RelativeAngles& offset, double az_hpbw_deg, double el_hpbw_deg);

struct AspectGain {
    double gain_db{0.0};
    bool back_lobe{false};
};

/// One-way relative gain of the sensor towards `line_of_sight` (unit vector
/// pointing from the sensor to the radar).
AspectGain aspect_gain_db(const SensorAntenna& antenna, const Vec3& line_of_sight);

struct SensorState {
    double level_mm{0.0};
    SensorPhysics physics{};
    SensorAntenna antenna{};
    Vec3 position{};

    double temperature_C() const { return temperature_from_level(physics, level_mm); }
};

}  // namespace orf
