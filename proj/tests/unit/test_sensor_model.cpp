#include <gtest/gtest.h>

#include "oracles.hpp"
#include "orf/errors.hpp"
#include "orf/sensor_model.hpp"

using namespace orf;

TEST(Sensitivity, MatchesIndependentFormula) {
    const SensorPhysics p;
    EXPECT_NEAR(sensitivity_C_per_mm(p), oracle::sensitivity_c_per_mm(0.25, 11.5e-5, 100.0), 1e-12);
    EXPECT_NEAR(sensitivity_C_per_mm(p), 17.07, 0.005);
}

TEST(Sensitivity, ScalesWithGeometry) {
    SensorPhysics p;
    const double base = sensitivity_C_per_mm(p);
    p.channel_radius_mm *= 2.0;
    EXPECT_NEAR(sensitivity_C_per_mm(p), 4.0 * base, 1e-9);
    p.tank_volume_mm3 *= 4.0;
    EXPECT_NEAR(sensitivity_C_per_mm(p), base, 1e-9);
}

TEST(TemperatureLevel, Anchors) {
    const SensorPhysics p;
    EXPECT_EQ(temperature_from_level(p, 0.0), 20.0);
    EXPECT_NEAR(temperature_from_level(p, 2.0), 54.15, 0.01);
    EXPECT_NEAR(temperature_from_level(p, 2.4), 60.98, 0.01);
    EXPECT_NEAR(full_scale_range_C(p), 61.466, 0.001);
    EXPECT_NEAR(quantization_precision_C(p), 3.415, 0.001);
}

TEST(TemperatureLevel, RoundTripProperty) {
    const SensorPhysics p;
    oracle::Gen gen(21);
    for (int i = 0; i < 1000; ++i) {
        const double level = gen.uniform(0.0, p.max_level_mm);
        EXPECT_NEAR(level_from_temperature(p, temperature_from_level(p, level)), level, 1e-12);
    }
}

TEST(TemperatureLevel, OutOfRange) {
    const SensorPhysics p;
    EXPECT_THROW(temperature_from_level(p, -0.01), DegenerateInput);
    EXPECT_THROW(temperature_from_level(p, 3.7), DegenerateInput);
    EXPECT_THROW(level_from_temperature(p, 10.0), DegenerateInput);
    EXPECT_THROW(level_from_temperature(p, 90.0), DegenerateInput);
}

TEST(Physics, ValidateRejectsNonPositive) {
    SensorPhysics p;
    EXPECT_NO_THROW(p.validate());
    p.alpha_v_per_K = 0.0;
    try {
        p.validate();
        FAIL();
    } catch (const ConfigurationError& e) {
        EXPECT_EQ(e.field(), "sensor.alpha_v_per_K");
    }
    p = {};
    p.level_step_mm = 0.25;
    EXPECT_THROW(p.validate(), ConfigurationError);
}

TEST(Modulation, LinearAndMonotone) {
    const SensorPhysics p;
    EXPECT_DOUBLE_EQ(modulation_loss_db(p, 0.0, 6.0), 0.0);
    EXPECT_DOUBLE_EQ(modulation_loss_db(p, 2.4, 6.0), 14.4);
    double prev = -1.0;
    for (double l = 0.0; l <= 3.6; l += 0.1) {
        const double m = modulation_loss_db(p, l, 6.0);
        EXPECT_GE(m, prev);
        prev = m;
    }
    EXPECT_THROW(modulation_loss_db(p, 1.0, -1.0), DegenerateInput);
    EXPECT_THROW(modulation_loss_db(p, 4.0, 6.0), DegenerateInput);
}

TEST(BeamPattern, HalfPowerAtHalfBeamwidth) {
    EXPECT_DOUBLE_EQ(gaussian_beam_gain_db({0.0, 0.0}, 62, 50), 0.0);
    EXPECT_NEAR(gaussian_beam_gain_db({31.0, 0.0}, 62, 50), -3.0, 1e-12);
    EXPECT_NEAR(gaussian_beam_gain_db({0.0, -25.0}, 62, 50), -3.0, 1e-12);
    EXPECT_DOUBLE_EQ(gaussian_beam_gain_db({170.0, 0.0}, 62, 50), kBackLobeFloorDb);
}

TEST(BeamPattern, SymmetricAndNonIncreasingProperty) {
    oracle::Gen gen(22);
    for (int i = 0; i < 1000; ++i) {
        const double a = gen.uniform(0, 90), e = gen.uniform(0, 90);
        const double g = gaussian_beam_gain_db({a, e}, 62, 50);
        EXPECT_DOUBLE_EQ(g, gaussian_beam_gain_db({-a, -e}, 62, 50));
        EXPECT_LE(gaussian_beam_gain_db({a + 1.0, e}, 62, 50), g);
        EXPECT_LE(g, 0.0);
        EXPECT_GE(g, kBackLobeFloorDb);
    }
}

TEST(Aspect, FacingAndBackLobe) {
    const SensorAntenna antenna;  // looks along -y
    const auto facing = aspect_gain_db(antenna, {0.0, -1.0, 0.0});
    EXPECT_DOUBLE_EQ(facing.gain_db, 0.0);
    EXPECT_FALSE(facing.back_lobe);
    const auto back = aspect_gain_db(antenna, {0.0, 1.0, 0.0});
    EXPECT_TRUE(back.back_lobe);
    EXPECT_DOUBLE_EQ(back.gain_db, kBackLobeFloorDb);
    const auto off = aspect_gain_db(antenna, spherical_to_cartesian({180.0 + 31.0, 0.0, 1.0}));
    EXPECT_NEAR(off.gain_db, -3.0, 1e-9);
}

TEST(Aspect, AntennaValidation) {
    SensorAntenna a;
    a.boresight = {1.0, 1.0, 0.0};
    EXPECT_THROW(a.validate(), ConfigurationError);
    a = {};
    a.azimuth_hpbw_deg = 0.0;
    EXPECT_THROW(a.validate(), ConfigurationError);
}
