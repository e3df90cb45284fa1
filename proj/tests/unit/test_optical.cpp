#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "orf/errors.hpp"
#include "orf/optical.hpp"

using namespace orf;

TEST(Hsv, PureColorsAreExact) {
    struct Case {
        Rgb rgb;
        double h, s, v;
    };
    const Case cases[] = {
        {{255, 0, 0}, 0, 1, 1},     {{0, 255, 0}, 120, 1, 1},   {{0, 0, 255}, 240, 1, 1},
        {{255, 255, 0}, 60, 1, 1},  {{0, 255, 255}, 180, 1, 1}, {{255, 0, 255}, 300, 1, 1},
        {{255, 255, 255}, 0, 0, 1}, {{0, 0, 0}, 0, 0, 0},
    };
    for (const auto& c : cases) {
        const Hsv hsv = rgb_to_hsv(c.rgb);
        EXPECT_EQ(hsv.h, c.h);
        EXPECT_EQ(hsv.s, c.s);
        EXPECT_EQ(hsv.v, c.v);
        EXPECT_EQ(hsv_to_rgb({c.h, c.s, c.v}), c.rgb);
    }
    const Hsv gray = rgb_to_hsv({128, 128, 128});
    EXPECT_EQ(gray.s, 0.0);
    EXPECT_DOUBLE_EQ(gray.v, 128.0 / 255.0);
}

TEST(Hsv, RoundTripProperty) {
    oracle::Gen gen(41);
    for (int i = 0; i < 20000; ++i) {
        const Rgb c{static_cast<std::uint8_t>(gen.integer(0, 255)), static_cast<std::uint8_t>(gen.integer(0, 255)),
                    static_cast<std::uint8_t>(gen.integer(0, 255))};
        const Hsv hsv = rgb_to_hsv(c);
        EXPECT_GE(hsv.h, 0.0);
        EXPECT_LT(hsv.h, 360.0);
        EXPECT_EQ(hsv_to_rgb(hsv), c);
    }
}

TEST(Thresholds, HueWrapsThroughZero) {
    const HsvThresholds t;
    EXPECT_TRUE(t.contains({355.0, 0.9, 0.9}));
    EXPECT_TRUE(t.contains({5.0, 0.9, 0.9}));
    EXPECT_FALSE(t.contains({20.0, 0.9, 0.9}));
    EXPECT_FALSE(t.contains({0.0, 0.2, 0.9}));
    EXPECT_FALSE(t.contains({0.0, 0.9, 0.1}));
    HsvThresholds green{100, 140, 0.5, 1, 0.3, 1};
    EXPECT_TRUE(green.contains({120, 0.8, 0.8}));
    EXPECT_FALSE(green.contains({0, 0.8, 0.8}));
    EXPECT_TRUE(rgb_to_hsv(LabelSpec{}.color).s > 0.5);
    EXPECT_TRUE(t.contains(rgb_to_hsv(LabelSpec{}.color)));
    EXPECT_FALSE(t.contains(rgb_to_hsv(LabelSpec{}.background)));
    green.sat_min = 2.0;
    EXPECT_THROW(green.validate(), ConfigurationError);
}

TEST(Camera, ProjectionIsLinearInAngle) {
    const CameraModel cam;
    EXPECT_NEAR(cam.pixels_per_degree(), 640.0 / 60.0, 1e-12);
    EXPECT_NEAR(cam.vfov_deg(), 45.0, 1e-12);
    const auto centre = project_to_pixel(cam, {0, 0}, {0, 3, 0});
    ASSERT_TRUE(centre);
    EXPECT_DOUBLE_EQ(centre->u, 320.0);
    EXPECT_DOUBLE_EQ(centre->v, 240.0);
    const auto right = project_to_pixel(cam, {0, 0}, spherical_to_cartesian({10.0, 0.0, 3.0}));
    ASSERT_TRUE(right);
    EXPECT_NEAR(right->u, 320.0 + 10.0 * cam.pixels_per_degree(), 1e-9);
    const auto up = project_to_pixel(cam, {0, 0}, spherical_to_cartesian({0.0, 5.0, 3.0}));
    ASSERT_TRUE(up);
    EXPECT_NEAR(up->v, 240.0 - 5.0 * cam.pixels_per_degree(), 1e-9);
    EXPECT_FALSE(project_to_pixel(cam, {0, 0}, {0, -3, 0}));
    EXPECT_FALSE(project_to_pixel(cam, {0, 0}, spherical_to_cartesian({35.0, 0.0, 3.0})));
    EXPECT_TRUE(project_to_pixel(cam, {30, 0}, spherical_to_cartesian({35.0, 0.0, 3.0})));
}

TEST(Camera, Validation) {
    CameraModel cam;
    cam.hfov_deg = 190.0;
    EXPECT_THROW(cam.validate(), ConfigurationError);
    cam = {};
    cam.width_px = 0;
    EXPECT_THROW(cam.validate(), ConfigurationError);
}

namespace {

SensorState sensor_at(const Vec3& p) {
    SensorState s;
    s.position = p;
    return s;
}

}  // namespace

TEST(Render, LabelSizeFollowsRange) {
    const CameraModel cam;
    const LabelSpec label;
    const Frame f = render_frame(cam, {0, 0}, sensor_at({0, 3.5, 0}), label, {}, 0.0);
    const auto d = detect_label(f, {}, 4);
    ASSERT_TRUE(d);
    const double w = rad_to_deg(label.width_m / 3.5) * cam.pixels_per_degree();
    const double h = rad_to_deg(label.height_m / 3.5) * cam.pixels_per_degree();
    EXPECT_NEAR(d->bbox.u_max - d->bbox.u_min + 1, w, 1.0);
    EXPECT_NEAR(d->bbox.v_max - d->bbox.v_min + 1, h, 1.0);
    EXPECT_NEAR(d->area_px, w * h, w + h + 1);
    EXPECT_NEAR(d->offset_u, 0.0, 0.5);
    EXPECT_NEAR(d->offset_v, 0.0, 0.5);
}

TEST(Render, OutOfViewGivesNoDetection) {
    const CameraModel cam;
    const Frame f = render_frame(cam, {0, 0}, sensor_at({0, -3.5, 0}), {}, {}, 0.0);
    EXPECT_FALSE(detect_label(f, {}, 4));
    EXPECT_EQ(f.pixels.size(), 640u * 480u);
}

TEST(Render, NoiseStatistics) {
    const CameraModel cam;
    std::mt19937_64 rng(3);
    const Frame f = render_frame(cam, {0, 0}, sensor_at({0, -3.5, 0}), {}, {4.0, &rng}, 0.0);
    double sum = 0.0, sum_sq = 0.0;
    for (const Rgb& p : f.pixels) {
        const double d = static_cast<double>(p.g) - 104.0;
        sum += d;
        sum_sq += d * d;
    }
    const double n = static_cast<double>(f.pixels.size());
    EXPECT_NEAR(sum / n, 0.0, 0.05);
    // Rounding adds 1/12 to the variance.
    EXPECT_NEAR(std::sqrt(sum_sq / n), std::sqrt(16.0 + 1.0 / 12.0), 0.05);
}

TEST(Detect, CentroidWithinOnePixelProperty) {
    const CameraModel cam;
    oracle::Gen gen(42);
    for (int i = 0; i < 200; ++i) {
        const MountAngles mount{gen.uniform(-30, 30), gen.uniform(-10, 10)};
        const Vec3 p = spherical_to_cartesian(
            {mount.pan_deg + gen.uniform(-25, 25), mount.tilt_deg + gen.uniform(-18, 18), gen.uniform(1.0, 4.5)});
        const auto truth = project_to_pixel(cam, mount, p);
        ASSERT_TRUE(truth);
        const auto d = detect_label(render_frame(cam, mount, sensor_at(p), {}, {}, 0.0), {}, 4);
        ASSERT_TRUE(d);
        EXPECT_LE(std::hypot(d->centroid.u - truth->u, d->centroid.v - truth->v), 1.0);
    }
}

TEST(Detect, PicksLargestFourConnectedBlob) {
    Frame f{20, 10, std::vector<Rgb>(200, Rgb{92, 104, 98}), 0.0};
    const Rgb red{220, 24, 32};
    for (int v = 1; v < 3; ++v) {
        for (int u = 1; u < 3; ++u) f.at(u, v) = red;  // 4 px
    }
    for (int v = 5; v < 8; ++v) {
        for (int u = 10; u < 13; ++u) f.at(u, v) = red;  // 9 px
    }
    const auto d = detect_label(f, {}, 4);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->area_px, 9);
    EXPECT_DOUBLE_EQ(d->centroid.u, 11.5);
    EXPECT_DOUBLE_EQ(d->centroid.v, 6.5);
    EXPECT_DOUBLE_EQ(d->offset_u, 1.5);
    EXPECT_DOUBLE_EQ(d->offset_v, 1.5);
    EXPECT_EQ(d->bbox.u_min, 10);
    EXPECT_EQ(d->bbox.v_max, 7);
    EXPECT_FALSE(detect_label(f, {}, 10));
}

TEST(Detect, DiagonalPixelsAreSeparateBlobs) {
    Frame f{4, 4, std::vector<Rgb>(16, Rgb{0, 0, 0}), 0.0};
    f.at(0, 0) = f.at(1, 1) = f.at(2, 2) = Rgb{255, 0, 0};
    const auto d = detect_label(f, {}, 1);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->area_px, 1);
}

TEST(Servo, OffsetsMapToAngles) {
    const CameraModel cam;
    const ServoGains g = ServoGains::matched(cam);
    const MountAngles a = offsets_to_angles(cam.pixels_per_degree() * 2.0, cam.pixels_per_degree(), g);
    EXPECT_NEAR(a.pan_deg, 2.0, 1e-12);
    EXPECT_NEAR(a.tilt_deg, -1.0, 1e-12);
}

TEST(Ppm, WritesBinaryP6) {
    const auto dir = std::filesystem::temp_directory_path() / "orf_ppm_test";
    std::filesystem::create_directories(dir);
    Frame f{3, 2, std::vector<Rgb>(6, Rgb{1, 2, 3}), 0.0};
    write_ppm(f, dir / "f.ppm");
    std::ifstream in(dir / "f.ppm", std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), {});
    EXPECT_EQ(content.substr(0, 11), "P6\n3 2\n255\n");
    EXPECT_EQ(content.size(), 11u + 18u);
    EXPECT_EQ(content[11], 1);
    EXPECT_THROW(write_ppm(f, dir / "missing" / "f.ppm"), IoError);
    std::filesystem::remove_all(dir);
}
