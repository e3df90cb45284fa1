#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "orf/csv.hpp"
#include "orf/errors.hpp"
#include "orf/harness.hpp"

using namespace orf;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("orf_harness_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string read(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

ScenarioConfig short_run() { return load_scenario(std::filesystem::path(ORF_SOURCE_DIR) / "tests/golden/short_run.json"); }

}  // namespace

TEST(Csv, NumbersIgnoreLocaleAndNegativeZero) {
    EXPECT_EQ(csv::number(1.25, 1), "1.2");
    EXPECT_EQ(csv::number(-0.0001, 3), "0.000");
    EXPECT_EQ(csv::number(-1.5, 2), "-1.50");
    EXPECT_EQ(csv::number(std::optional<double>{}, 2), "");
    EXPECT_EQ(csv::row({"a", "", "c"}), "a,,c\n");
    EXPECT_EQ(csv::split("a,,c"), (std::vector<std::string>{"a", "", "c"}));
    EXPECT_DOUBLE_EQ(csv::parse_number("-3.25"), -3.25);
    EXPECT_THROW(csv::parse_number("3.2x"), std::invalid_argument);
    EXPECT_THROW(csv::parse_number(""), std::invalid_argument);
}

TEST(Harness, FrameTimesCoverTheTraverse) {
    EXPECT_EQ(frame_times(*builtin_scenario("scenario1")).size(), 31u);
    EXPECT_EQ(frame_times(*builtin_scenario("scenario2")).size(), 17u);
    EXPECT_EQ(trace_file_name(0.6), "trace_level_0.6.csv");
}

TEST(Harness, RequiredSlewIsSpeedOverRange) {
    const MountAngles slew = required_slew_dps(*builtin_scenario("scenario1"));
    EXPECT_NEAR(slew.pan_deg, rad_to_deg(0.05 / 3.5), 0.01);
    EXPECT_DOUBLE_EQ(slew.tilt_deg, 0.0);
}

TEST(Harness, WritesTraceAndSummaryFiles) {
    ScenarioConfig cfg = short_run();
    cfg.output_dir = scratch("files");
    const auto runs = run_scenario(cfg);
    ASSERT_EQ(runs.size(), 2u);
    for (const auto& run : runs) {
        const auto text = read(cfg.output_dir / trace_file_name(run.level_mm));
        EXPECT_EQ(count_lines(text), run.trace.size() + 1);
        EXPECT_EQ(csv::split(text.substr(0, text.find('\n'))).size(), 16u);
        for (std::size_t i = 1; i < run.trace.size(); ++i) EXPECT_GT(run.trace[i].t_s, run.trace[i - 1].t_s);
    }
    EXPECT_EQ(count_lines(read(cfg.output_dir / "summary.csv")), 3u);
    std::filesystem::remove_all(cfg.output_dir);
}

TEST(Harness, SameSeedIsByteIdentical) {
    ScenarioConfig cfg = short_run();
    const auto a = run_scenario(cfg, {false, false});
    const auto b = run_scenario(cfg, {false, false});
    EXPECT_EQ(summary_csv(a), summary_csv(b));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(trace_csv(a[i]), trace_csv(b[i]));
    cfg.seed = 8;
    const auto c = run_scenario(cfg, {false, false});
    EXPECT_NE(trace_csv(a[0]), trace_csv(c[0]));
}

TEST(Harness, MatchesGoldenFiles) {
    const auto runs = run_scenario(short_run(), {false, false});
    const auto golden = std::filesystem::path(ORF_SOURCE_DIR) / "tests/golden";
    EXPECT_EQ(summary_csv(runs), read(golden / "short_run_summary.csv"));
    EXPECT_EQ(trace_csv(runs[0]), read(golden / "short_run_trace_level_0.0.csv"));
    EXPECT_EQ(trace_csv(runs[1]), read(golden / "short_run_trace_level_2.4.csv"));
}

TEST(Harness, LevelsUseIndependentSeeds) {
    ScenarioConfig cfg = short_run();
    cfg.levels_mm = {0.0, 0.2};
    const auto both = run_scenario(cfg, {false, false});
    cfg.levels_mm = {0.2};
    cfg.seed += 1;
    const auto second = run_scenario(cfg, {false, false});
    EXPECT_EQ(trace_csv(both[1]), trace_csv(second[0]));
}

TEST(Harness, LockWithinFiveCyclesFromTwentyDegrees) {
    for (const double offset : {-20.0, -10.0, 10.0, 20.0}) {
        ScenarioConfig cfg = *builtin_scenario("scenario1");
        cfg.levels_mm = {0.0};
        cfg.initial_offset = {offset, offset / 4.0};
        const auto run = run_scenario(cfg, {false, false}).front();
        const double px = 1.0 / cfg.fusion.camera.pixels_per_degree();
        for (std::size_t i = 5; i < run.trace.size(); ++i) {
            const auto& r = run.trace[i];
            ASSERT_TRUE(r.cycle.commanded_direction) << offset << " t=" << r.t_s;
            EXPECT_LE(std::abs(r.cycle.commanded_direction->pan_deg - r.truth.azimuth_deg), 2 * px)
                << offset << " t=" << r.t_s;
            EXPECT_LE(std::abs(r.cycle.commanded_direction->tilt_deg - r.truth.elevation_deg), 2 * px)
                << offset << " t=" << r.t_s;
        }
    }
}

TEST(Harness, MountLagIsOneFrameOfSensorMotion) {
    ScenarioConfig cfg = *builtin_scenario("scenario1");
    cfg.levels_mm = {0.0};
    cfg.initial_offset = {10.0, 2.5};
    const auto run = run_scenario(cfg, {false, false}).front();
    const double px = 1.0 / cfg.fusion.camera.pixels_per_degree();
    const double frame_s = 1.0 / cfg.fusion.camera.frame_rate_hz;
    for (std::size_t i = 5; i < run.trace.size(); ++i) {
        const auto& r = run.trace[i];
        const auto before = cartesian_to_spherical(cfg.sensor_at(0.0, r.t_s - frame_s).position);
        const double motion = std::abs(r.truth.azimuth_deg - before.azimuth_deg);
        EXPECT_LE(std::abs(r.mount.pan_deg - r.truth.azimuth_deg), motion + 2 * px) << "t=" << r.t_s;
    }
}

TEST(Harness, FrameDumps) {
    ScenarioConfig cfg = short_run();
    cfg.levels_mm = {0.0};
    cfg.output_dir = scratch("frames");
    run_scenario(cfg, {true, true});
    EXPECT_TRUE(std::filesystem::exists(cfg.output_dir / "frames" / "level_0.0_t0000.ppm"));
    EXPECT_EQ(std::filesystem::file_size(cfg.output_dir / "frames" / "level_0.0_t0000.ppm"), 15u + 640u * 480u * 3u);
    std::filesystem::remove_all(cfg.output_dir);
}

TEST(Harness, UnwritableDirectoryIsAnIoError) {
    const auto dir = scratch("blocked");
    std::filesystem::create_directories(dir);
    csv::write_file(dir / "file", "x");
    ScenarioConfig cfg = short_run();
    cfg.output_dir = dir / "file" / "sub";
    EXPECT_THROW(run_scenario(cfg), IoError);
    EXPECT_THROW(run_calibration(cfg), IoError);
    std::filesystem::remove_all(dir);
}

TEST(Calibration, CsvRoundTrip) {
    ScenarioConfig cfg = *builtin_scenario("scenario1");
    cfg.output_dir = scratch("calibration");
    const CalibrationCurve curve = run_calibration(cfg);
    const std::string text = read(cfg.output_dir / "calibration.csv");
    EXPECT_EQ(text.rfind("# reference x_m=0.201809 y_m=3.500000 z_m=0.000000 azimuth_deg=3.3000", 0), 0u);
    EXPECT_EQ(count_lines(text), 15u);
    const CalibrationCurve loaded = load_calibration_csv(cfg.output_dir / "calibration.csv");
    ASSERT_EQ(loaded.points.size(), 13u);
    for (std::size_t i = 0; i < 13; ++i) {
        EXPECT_NEAR(loaded.points[i].echo_db, curve.points[i].echo_db, 1e-6);
        if (i > 0) EXPECT_LT(loaded.points[i].echo_db, loaded.points[i - 1].echo_db);
    }
    EXPECT_NEAR((loaded.reference_position - curve.reference_position).norm(), 0.0, 1e-6);
    EXPECT_EQ(calibration_csv(loaded), text);
    run_calibration(cfg);
    EXPECT_EQ(read(cfg.output_dir / "calibration.csv"), text);
    std::filesystem::remove_all(cfg.output_dir);
}

TEST(Calibration, CsvParseErrors) {
    EXPECT_THROW(parse_calibration_csv("level_mm,temperature_C,echo_db\n"), ConfigurationError);
    EXPECT_THROW(parse_calibration_csv("# reference x_m=1 y_m=2\nlevel_mm,temperature_C,echo_db\n"), ConfigurationError);
    EXPECT_THROW(parse_calibration_csv("# reference x_m=0 y_m=3 z_m=0\nlevel_mm,temperature_C,echo_db\n0,20,-20\n0.2,23,x\n"),
                 ConfigurationError);
    EXPECT_THROW(parse_calibration_csv("# reference x_m=0 y_m=3 z_m=0\nlevel_mm,temperature_C,echo_db\n0,20,-20\n0.2,23,-19\n"),
                 ConfigurationError);
    EXPECT_NO_THROW(parse_calibration_csv("# reference x_m=0 y_m=3 z_m=0\nlevel_mm,temperature_C,echo_db\n0,20,-20\n0.2,23,-21\n"));
    EXPECT_THROW(load_calibration_csv("/nonexistent/calibration.csv"), IoError);
}

TEST(Spectrum, DebugDumpPeaksAtBinOneHundred) {
    const std::string text = spectrum_csv(*builtin_scenario("scenario1"), 3.75, 0.0);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "bin_hz,magnitude_db");
    double best = -1e9;
    std::string best_bin;
    int rows = 0;
    while (std::getline(in, line)) {
        const auto f = csv::split(line);
        ++rows;
        if (f[0] == "0.0" || f[0] == "66.7") continue;
        const double m = csv::parse_number(f[1]);
        if (m > best) {
            best = m;
            best_bin = f[0];
        }
    }
    EXPECT_EQ(rows, 128);
    EXPECT_EQ(best_bin, "6666.7");
    EXPECT_THROW(spectrum_csv(*builtin_scenario("scenario1"), 5.0, 0.0), AliasRisk);
}
