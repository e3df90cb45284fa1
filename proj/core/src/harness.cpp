#include "orf/harness.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "orf/csv.hpp"
#include "orf/errors.hpp"

namespace orf {

namespace {

CycleRandom level_random(std::uint64_t seed) {
    std::seed_seq camera{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0u};
    std::seed_seq radar{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 1u};
    return {std::mt19937_64(camera), std::mt19937_64(radar)};
}

void advance_mount(PanTiltState& mount, double duration_s, double tick_s) {
    const auto whole = static_cast<long>(std::floor(duration_s / tick_s + 1e-9));
    for (long i = 0; i < whole; ++i) mount = step(mount, tick_s);
    const double rest = duration_s - static_cast<double>(whole) * tick_s;
    if (rest > 1e-9) mount = step(mount, rest);
}

LevelSummary summarize(double level_mm, const ScenarioConfig& cfg, const std::vector<TraceRecord>& trace) {
    LevelSummary s;
    s.level_mm = level_mm;
    s.temperature_C = temperature_from_level(cfg.model.physics, level_mm);
    s.cycles = static_cast<int>(trace.size());
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& rec : trace) {
        if (const auto& radar = rec.cycle.radar) {
            if (!s.max_echo_db || radar->echo_db > *s.max_echo_db) {
                s.max_echo_db = radar->echo_db;
                s.azimuth_at_max_deg = rec.truth.azimuth_deg;
                s.range_at_max_m = radar->range_m;
            }
        }
        if (rec.cycle.status == CycleStatus::ok) {
            const double t = rec.cycle.temperature->temperature_C;
            ++s.ok_cycles;
            sum += t;
            sum_sq += t * t;
        }
    }
    if (s.ok_cycles > 0) {
        const double mean = sum / s.ok_cycles;
        s.mean_temperature_C = mean;
        s.std_temperature_C = std::sqrt(std::max(0.0, sum_sq / s.ok_cycles - mean * mean));
    }
    return s;
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
}

}  // namespace

std::vector<double> frame_times(const ScenarioConfig& cfg) {
    const double end = cfg.path.traverse_time_s();
    const double rate = cfg.fusion.camera.frame_rate_hz;
    std::vector<double> times;
    for (long n = 0;; ++n) {
        const double t = static_cast<double>(n) / rate;
        if (t > end + 1e-9) break;
        times.push_back(t);
    }
    return times;
}

MountAngles required_slew_dps(const ScenarioConfig& cfg) {
    const double end = cfg.path.traverse_time_s();
    const double dt = cfg.fusion.tick_s;
    MountAngles peak{};
    SphericalPose prev = cartesian_to_spherical(conveyor_position(cfg.path, 0.0));
    for (double t = dt; t <= end + 1e-9; t += dt) {
        const SphericalPose next = cartesian_to_spherical(conveyor_position(cfg.path, std::min(t, end)));
        double d_az = next.azimuth_deg - prev.azimuth_deg;
        if (d_az > 180.0) d_az -= 360.0;
        if (d_az < -180.0) d_az += 360.0;
        peak.pan_deg = std::max(peak.pan_deg, std::abs(d_az) / dt);
        peak.tilt_deg = std::max(peak.tilt_deg, std::abs(next.elevation_deg - prev.elevation_deg) / dt);
        prev = next;
    }
    return peak;
}

LevelRun simulate_level(const ScenarioConfig& cfg, const FusionController& controller, std::size_t level_index,
                        const std::optional<std::filesystem::path>& frames_dir) {
    LevelRun run;
    run.level_mm = cfg.levels_mm.at(level_index);
    CycleRandom random = level_random(cfg.seed + level_index);
    PanTiltState mount = cfg.initial_mount();
    const double tick = cfg.fusion.tick_s;
    const double period = cfg.fusion.camera.frame_period_s();

    Frame frame;
    for (const double t : frame_times(cfg)) {
        const SensorState sensor = cfg.sensor_at(run.level_mm, t);
        TraceRecord rec;
        rec.t_s = t;
        rec.truth = cartesian_to_spherical(sensor.position);
        rec.cycle = controller.control_cycle(sensor, mount, t, random, frames_dir ? &frame : nullptr);
        rec.mount = mount.orientation();
        run.trace.push_back(rec);
        if (frames_dir) {
            write_ppm(frame, *frames_dir / fmt::format("level_{:.1f}_t{:04d}.ppm", run.level_mm,
                                                       static_cast<int>(std::lround(t * 1000.0))));
        }
        advance_mount(mount, period - tick, tick);
    }
    run.summary = summarize(run.level_mm, cfg, run.trace);
    return run;
}

std::vector<LevelRun> run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
    cfg.validate();
    const FusionController controller(cfg.fusion, cfg.model, cfg.calibrate());

    std::optional<std::filesystem::path> frames_dir;
    if (options.write_files) {
        ensure_directory(cfg.output_dir);
        if (options.dump_frames) {
            frames_dir = cfg.output_dir / "frames";
            ensure_directory(*frames_dir);
        }
    }

    std::vector<LevelRun> runs;
    runs.reserve(cfg.levels_mm.size());
    for (std::size_t i = 0; i < cfg.levels_mm.size(); ++i) {
        runs.push_back(simulate_level(cfg, controller, i, frames_dir));
        if (options.write_files) {
            csv::write_file(cfg.output_dir / trace_file_name(runs.back().level_mm), trace_csv(runs.back()));
        }
    }
    if (options.write_files) csv::write_file(cfg.output_dir / "summary.csv", summary_csv(runs));
    return runs;
}

CalibrationCurve run_calibration(const ScenarioConfig& cfg) {
    cfg.validate();
    CalibrationCurve curve = cfg.calibrate();
    ensure_directory(cfg.output_dir);
    csv::write_file(cfg.output_dir / "calibration.csv", calibration_csv(curve));
    return curve;
}

std::string trace_file_name(double level_mm) { return fmt::format("trace_level_{:.1f}.csv", level_mm); }

std::string trace_csv(const LevelRun& run) {
    using csv::number;
    std::string out = csv::row({"t_s", "true_azimuth_deg", "true_elevation_deg", "true_range_m", "mount_pan_deg",
                                "mount_tilt_deg", "label_u_px", "label_v_px", "offset_u_px", "offset_v_px", "beat_hz",
                                "range_est_m", "echo_db", "temperature_est_C", "sigma_C", "status"});
    for (const auto& rec : run.trace) {
        const auto& c = rec.cycle;
        std::optional<double> u, v, du, dv, beat, range, echo, temp, sigma;
        if (c.detection) {
            u = c.detection->centroid.u;
            v = c.detection->centroid.v;
            du = c.detection->offset_u;
            dv = c.detection->offset_v;
        }
        if (c.radar) {
            beat = c.radar->beat_hz;
            range = c.radar->range_m;
            echo = c.radar->echo_db;
        }
        if (c.temperature) {
            temp = c.temperature->temperature_C;
            sigma = c.temperature->sigma_C;
        }
        out += csv::row({number(rec.t_s, 3), number(rec.truth.azimuth_deg, 4), number(rec.truth.elevation_deg, 4),
                         number(rec.truth.range_m, 4), number(rec.mount.pan_deg, 1), number(rec.mount.tilt_deg, 1),
                         number(u, 3), number(v, 3), number(du, 3), number(dv, 3), number(beat, 2), number(range, 4),
                         number(echo, 3), number(temp, 3), number(sigma, 3), to_string(c.status)});
    }
    return out;
}

std::string summary_csv(const std::vector<LevelRun>& runs) {
    using csv::number;
    std::string out = csv::row({"level_mm", "temperature_C", "max_echo_db", "azimuth_at_max_deg", "range_at_max_m",
                                "mean_temperature_est_C", "std_temperature_est_C", "ok_cycles", "cycles"});
    for (const auto& run : runs) {
        const auto& s = run.summary;
        out += csv::row({number(s.level_mm, 1), number(s.temperature_C, 3), number(s.max_echo_db, 3),
                         number(s.azimuth_at_max_deg, 4), number(s.range_at_max_m, 4),
                         number(s.mean_temperature_C, 3), number(s.std_temperature_C, 3),
                         std::to_string(s.ok_cycles), std::to_string(s.cycles)});
    }
    return out;
}

std::string calibration_csv(const CalibrationCurve& curve) {
    using csv::number;
    const Vec3& p = curve.reference_position;
    const SphericalPose pose = curve.reference_pose();
    std::string out = fmt::format("# reference x_m={} y_m={} z_m={} azimuth_deg={} elevation_deg={} range_m={}\n",
                                  number(p.x, 6), number(p.y, 6), number(p.z, 6), number(pose.azimuth_deg, 4),
                                  number(pose.elevation_deg, 4), number(pose.range_m, 4));
    out += csv::row({"level_mm", "temperature_C", "echo_db"});
    for (const auto& pt : curve.points) {
        out += csv::row({number(pt.level_mm, 1), number(pt.temperature_C, 4), number(pt.echo_db, 6)});
    }
    return out;
}

CalibrationCurve parse_calibration_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    CalibrationCurve curve;
    int line_no = 0;
    auto fail = [&](const std::string& what) {
        throw ConfigurationError(fmt::format("line {}: {}", line_no, what), "calibration");
    };

    ++line_no;
    if (!std::getline(in, line) || line.rfind("# reference", 0) != 0) fail("missing '# reference' header");
    bool have_x = false, have_y = false, have_z = false;
    std::istringstream header(line.substr(11));
    std::string item;
    while (header >> item) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) fail("malformed reference entry \"" + item + "\"");
        const std::string key = item.substr(0, eq);
        double value = 0.0;
        try {
            value = csv::parse_number(std::string_view(item).substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        if (key == "x_m") curve.reference_position.x = value, have_x = true;
        if (key == "y_m") curve.reference_position.y = value, have_y = true;
        if (key == "z_m") curve.reference_position.z = value, have_z = true;
    }
    if (!(have_x && have_y && have_z)) fail("reference must give x_m, y_m and z_m");

    ++line_no;
    if (!std::getline(in, line) || line != "level_mm,temperature_C,echo_db") fail("unexpected column header");
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() != 3) fail("expected 3 fields");
        try {
            curve.points.push_back(
                {csv::parse_number(fields[0]), csv::parse_number(fields[1]), csv::parse_number(fields[2])});
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    curve.validate();
    return curve;
}

CalibrationCurve load_calibration_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_calibration_csv(text.str());
}

std::string spectrum_csv(const ScenarioConfig& cfg, double range_m, double level_mm) {
    cfg.validate();
    if (!(range_m > 0.0)) throw DegenerateInput("range must be positive");
    SensorState sensor{level_mm, cfg.model.physics, cfg.model.antenna, {0.0, range_m, 0.0}};
    sensor.antenna.boresight = {0.0, -1.0, 0.0};
    const MountAngles pointing{0.0, 0.0};
    const EchoTarget target{range_m, link_echo_db(cfg.model.radar, sensor, pointing, cfg.model.link), 0.0};
    const auto samples = synthesize_beat(cfg.model.radar, std::span(&target, 1), cfg.model.clutter, cfg.seed);
    const BeatSpectrum spectrum = beat_spectrum(cfg.model.radar, samples, cfg.fusion.window);

    std::string out = csv::row({"bin_hz", "magnitude_db"});
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        out += csv::row({csv::number(spectrum.frequency_hz(k), 1), csv::number(spectrum.magnitudes_db[k], 3)});
    }
    return out;
}

}  // namespace orf
