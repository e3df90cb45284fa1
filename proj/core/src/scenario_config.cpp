#include "orf/scenario_config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "orf/errors.hpp"

namespace orf {

namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Reads a JSON object into existing values, leaving missing keys untouched
// and rejecting keys nobody asked for.
class Reader {
public:
    static constexpr bool reading = true;

    Reader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigurationError("expected an object", path_.empty() ? "<root>" : path_);
    }

    template <typename T>
    void field(const std::string& key, T& value) {
        seen_.insert(key);
        const auto it = node_.find(key);
        if (it == node_.end()) return;
        try {
            value = it->template get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigurationError(fmt::format("expected {}, got {}", type_name<T>(), it->dump()), join(path_, key));
        }
    }

    template <typename Fn>
    void section(const std::string& key, Fn&& fn) {
        seen_.insert(key);
        const auto it = node_.find(key);
        if (it == node_.end()) return;
        Reader child(*it, join(path_, key));
        fn(child);
        child.finish();
    }

    bool has(const std::string& key) const { return node_.contains(key); }
    void mark(const std::string& key) { seen_.insert(key); }
    std::string path(const std::string& key) const { return join(path_, key); }

    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.count(key)) throw ConfigurationError("unknown key", join(path_, key));
        }
    }

private:
    template <typename T>
    static const char* type_name() {
        if constexpr (std::is_same_v<T, std::string>) return "a string";
        else if constexpr (std::is_same_v<T, bool>) return "a boolean";
        else if constexpr (std::is_integral_v<T>) return "an integer";
        else if constexpr (std::is_arithmetic_v<T>) return "a number";
        else return "an array";
    }

    const Json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

class Writer {
public:
    static constexpr bool reading = false;

    explicit Writer(Json& node) : node_(node) { node_ = Json::object(); }

    template <typename T>
    void field(const std::string& key, T& value) {
        node_[key] = value;
    }

    template <typename Fn>
    void section(const std::string& key, Fn&& fn) {
        Writer child(node_[key]);
        fn(child);
    }

    bool has(const std::string&) const { return true; }
    std::string path(const std::string& key) const { return key; }

private:
    Json& node_;
};

template <typename Io>
void vec3(Io& io, const std::string& key, Vec3& v) {
    std::array<double, 3> a{v.x, v.y, v.z};
    io.field(key, a);
    v = {a[0], a[1], a[2]};
}

template <typename Io>
void color(Io& io, const std::string& key, Rgb& c) {
    std::array<int, 3> a{c.r, c.g, c.b};
    io.field(key, a);
    for (int ch : a) {
        if (ch < 0 || ch > 255) throw ConfigurationError("channels must lie in [0, 255]", io.path(key));
    }
    c = {static_cast<std::uint8_t>(a[0]), static_cast<std::uint8_t>(a[1]), static_cast<std::uint8_t>(a[2])};
}

template <typename Io>
void angles(Io& io, const std::string& key, MountAngles& m) {
    std::array<double, 2> a{m.pan_deg, m.tilt_deg};
    io.field(key, a);
    m = {a[0], a[1]};
}

template <typename Io>
void optional_number(Io& io, const std::string& key, std::optional<double>& value) {
    if constexpr (Io::reading) {
        if (!io.has(key)) {
            io.mark(key);
            return;
        }
        Json probe;
        io.field(key, probe);
        if (probe.is_null()) {
            value.reset();
        } else if (probe.is_number()) {
            value = probe.get<double>();
        } else {
            throw ConfigurationError("expected a number or null", io.path(key));
        }
    } else {
        Json out = value ? Json(*value) : Json(nullptr);
        io.field(key, out);
    }
}

template <typename Io>
void window(Io& io, const std::string& key, Window& w) {
    std::string name = w == Window::hann ? "hann" : "rectangular";
    io.field(key, name);
    if (name == "hann") {
        w = Window::hann;
    } else if (name == "rectangular") {
        w = Window::rectangular;
    } else {
        throw ConfigurationError("expected \"hann\" or \"rectangular\"", io.path(key));
    }
}

template <typename Io>
void visit(Io& io, ScenarioConfig& cfg) {
    io.field("id", cfg.id);
    io.field("seed", cfg.seed);
    std::string out = cfg.output_dir.string();
    io.field("output_dir", out);
    cfg.output_dir = out;
    io.field("levels_mm", cfg.levels_mm);

    io.section("conveyor", [&](auto& s) {
        vec3(s, "start_m", cfg.path.start_point);
        vec3(s, "direction", cfg.path.direction);
        s.field("length_m", cfg.path.length_m);
        s.field("speed_mps", cfg.path.speed_mps);
    });

    io.section("calibration", [&](auto& s) {
        std::string kind = cfg.calibration.kind == CalibrationReference::Kind::azimuth ? "azimuth" : "range";
        s.field("reference", kind);
        if (kind == "azimuth") {
            cfg.calibration.kind = CalibrationReference::Kind::azimuth;
        } else if (kind == "range") {
            cfg.calibration.kind = CalibrationReference::Kind::range;
        } else {
            throw ConfigurationError("expected \"azimuth\" or \"range\"", s.path("reference"));
        }
        s.field("value", cfg.calibration.value);
        s.field("echo_sigma_db", cfg.model.echo_sigma_db);
        s.field("pattern_error_deg", cfg.model.pattern_error_deg);
        optional_number(s, "undetectable_margin_db", cfg.model.undetectable_margin_db);
    });

    io.section("radar", [&](auto& s) {
        ChirpConfig& r = cfg.model.radar;
        s.field("carrier_hz", r.carrier_hz);
        s.field("bandwidth_hz", r.bandwidth_hz);
        s.field("chirp_duration_s", r.chirp_duration_s);
        s.field("num_samples", r.num_samples);
        s.field("tx_gain_dbi", r.tx_gain_dbi);
        s.field("rx_gain_dbi", r.rx_gain_dbi);
        s.field("tx_power_dbm", r.tx_power_dbm);
        s.field("az_hpbw_deg", r.az_hpbw_deg);
        s.field("el_hpbw_deg", r.el_hpbw_deg);
        s.field("speed_of_light_mps", r.speed_of_light_mps);
        window(s, "window", cfg.fusion.window);
        cfg.model.window = cfg.fusion.window;
        s.field("min_bin", cfg.fusion.min_bin);
        s.field("chirps_per_cycle", cfg.fusion.chirps_per_cycle);
        s.field("detection_margin_db", cfg.fusion.detection_margin_db);
        angles(s, "boresight_offset_deg", cfg.fusion.radar_boresight_offset);
    });

    io.section("link", [&](auto& s) {
        s.field("anchor_db", cfg.model.link.anchor_db);
        s.field("reference_range_m", cfg.model.link.reference_range_m);
        s.field("modulation_slope_db_per_mm", cfg.model.link.modulation_slope_db_per_mm);
    });

    io.section("clutter", [&](auto& s) {
        std::optional<double> floor;
        if (cfg.model.clutter.has_floor()) floor = cfg.model.clutter.floor_db;
        optional_number(s, "floor_db", floor);
        cfg.model.clutter.floor_db = floor.value_or(-300.0);
        std::vector<std::array<double, 2>> tones;
        for (const auto& t : cfg.model.clutter.tones) tones.push_back({t.range_m, t.level_db});
        s.field("tones_range_level", tones);
        cfg.model.clutter.tones.clear();
        for (const auto& t : tones) cfg.model.clutter.tones.push_back({t[0], t[1], 0.0});
    });

    io.section("sensor", [&](auto& s) {
        SensorPhysics& p = cfg.model.physics;
        s.field("channel_radius_mm", p.channel_radius_mm);
        s.field("alpha_v_per_K", p.alpha_v_per_K);
        s.field("tank_volume_mm3", p.tank_volume_mm3);
        s.field("max_level_mm", p.max_level_mm);
        s.field("ref_temperature_C", p.ref_temperature_C);
        s.field("level_step_mm", p.level_step_mm);
        SensorAntenna& a = cfg.model.antenna;
        s.field("azimuth_hpbw_deg", a.azimuth_hpbw_deg);
        s.field("elevation_hpbw_deg", a.elevation_hpbw_deg);
        const SphericalPose b = cartesian_to_spherical(a.boresight);
        double az = b.azimuth_deg, el = b.elevation_deg;
        s.field("boresight_azimuth_deg", az);
        s.field("boresight_elevation_deg", el);
        if constexpr (std::decay_t<decltype(s)>::reading) a.boresight = spherical_to_cartesian({az, el, 1.0});
    });

    io.section("camera", [&](auto& s) {
        CameraModel& c = cfg.fusion.camera;
        s.field("width_px", c.width_px);
        s.field("height_px", c.height_px);
        s.field("frame_rate_hz", c.frame_rate_hz);
        s.field("hfov_deg", c.hfov_deg);
        s.field("noise_sigma", cfg.fusion.pixel_noise_sigma);
        s.field("label_width_m", cfg.fusion.label.width_m);
        s.field("label_height_m", cfg.fusion.label.height_m);
        color(s, "label_rgb", cfg.fusion.label.color);
        color(s, "background_rgb", cfg.fusion.label.background);
    });

    io.section("detection", [&](auto& s) {
        HsvThresholds& t = cfg.fusion.thresholds;
        s.field("hue_min_deg", t.hue_min_deg);
        s.field("hue_max_deg", t.hue_max_deg);
        s.field("sat_min", t.sat_min);
        s.field("sat_max", t.sat_max);
        s.field("val_min", t.val_min);
        s.field("val_max", t.val_max);
        s.field("min_area_px", cfg.fusion.min_area_px);
        std::optional<double> pan_gain, tilt_gain;
        if (cfg.fusion.gains) {
            pan_gain = cfg.fusion.gains->pan_deg_per_px;
            tilt_gain = cfg.fusion.gains->tilt_deg_per_px;
        }
        optional_number(s, "pan_gain_deg_per_px", pan_gain);
        optional_number(s, "tilt_gain_deg_per_px", tilt_gain);
        if (pan_gain.has_value() != tilt_gain.has_value()) {
            throw ConfigurationError("set both servo gains or neither", s.path("pan_gain_deg_per_px"));
        }
        if (pan_gain) {
            cfg.fusion.gains = ServoGains{*pan_gain, *tilt_gain};
        } else {
            cfg.fusion.gains.reset();
        }
    });

    io.section("mount", [&](auto& s) {
        PanTiltState& m = cfg.mount;
        s.field("pan_speed_dps", m.pan_speed_dps);
        s.field("tilt_speed_dps", m.tilt_speed_dps);
        s.field("precision_deg", m.precision_deg);
        s.field("pan_limit_deg", m.pan_limit_deg);
        s.field("tilt_limit_deg", m.tilt_limit_deg);
        angles(s, "initial_offset_deg", cfg.initial_offset);
    });

    io.section("simulation", [&](auto& s) { s.field("tick_s", cfg.fusion.tick_s); });
}

ScenarioConfig scenario1() {
    ScenarioConfig cfg;
    cfg.id = "scenario1";
    cfg.path.start_point = {-0.75, 3.5, 0.0};
    cfg.path.direction = {1.0, 0.0, 0.0};
    cfg.path.length_m = 1.5;
    cfg.path.speed_mps = 0.05;
    cfg.levels_mm = level_sweep(2.4, 0.2);
    cfg.calibration = {CalibrationReference::Kind::azimuth, 3.3};
    cfg.model.antenna.boresight = {0.0, -1.0, 0.0};
    cfg.model.clutter.floor_db = cfg.model.link.anchor_db - 14.4;
    cfg.output_dir = "out/scenario1";
    return cfg;
}

ScenarioConfig scenario2() {
    ScenarioConfig cfg = scenario1();
    cfg.id = "scenario2";
    const double diagonal = deg_to_rad(35.0);
    cfg.path.start_point = {0.0, 2.9, 0.0};
    cfg.path.direction = {std::sin(diagonal), std::cos(diagonal), 0.0};
    cfg.path.speed_mps = 0.09;
    cfg.calibration = {CalibrationReference::Kind::range, 3.8};
    cfg.model.antenna.boresight = spherical_to_cartesian({248.1 - 360.0, 0.0, 1.0});
    cfg.output_dir = "out/scenario2";
    return cfg;
}

}  // namespace

Vec3 CalibrationReference::resolve(const ConveyorPath& path) const {
    try {
        return kind == Kind::azimuth ? conveyor_point_at_azimuth(path, value) : conveyor_point_at_range(path, value);
    } catch (const DegenerateInput& e) {
        throw ConfigurationError(e.what(), "calibration.value");
    }
}

std::string CalibrationReference::describe() const {
    return kind == Kind::azimuth ? fmt::format("azimuth_deg={}", value) : fmt::format("range_m={}", value);
}

void ScenarioConfig::validate() const {
    if (id.empty()) throw ConfigurationError("must not be empty", "id");
    path.validate();
    if (!std::isfinite(path.traverse_time_s())) throw ConfigurationError("must be positive", "conveyor.speed_mps");
    if (levels_mm.empty()) throw ConfigurationError("needs at least one level", "levels_mm");
    for (std::size_t i = 0; i < levels_mm.size(); ++i) {
        if (!(levels_mm[i] >= 0.0 && levels_mm[i] <= model.physics.max_level_mm)) {
            throw ConfigurationError("levels must lie in [0, sensor.max_level_mm]", fmt::format("levels_mm[{}]", i));
        }
        if (i > 0 && !(levels_mm[i] > levels_mm[i - 1])) {
            throw ConfigurationError("levels must increase strictly", fmt::format("levels_mm[{}]", i));
        }
    }
    model.radar.validate();
    model.physics.validate();
    model.antenna.validate();
    if (!(model.link.reference_range_m > 0.0)) throw ConfigurationError("must be positive", "link.reference_range_m");
    if (!(model.echo_sigma_db >= 0.0)) throw ConfigurationError("must be non-negative", "calibration.echo_sigma_db");
    if (model.undetectable_margin_db && !(*model.undetectable_margin_db >= 0.0)) {
        throw ConfigurationError("must be non-negative", "calibration.undetectable_margin_db");
    }
    const double r_max = max_unambiguous_range(model.radar);
    for (std::size_t i = 0; i < model.clutter.tones.size(); ++i) {
        const double r = model.clutter.tones[i].range_m;
        if (!(r > 0.0 && r < r_max)) {
            throw ConfigurationError(fmt::format("range must lie in (0, {:.3f}) m", r_max),
                                     fmt::format("clutter.tones_range_level[{}]", i));
        }
    }
    fusion.validate();
    if (fusion.min_bin >= model.radar.num_samples / 2) throw ConfigurationError("beyond the spectrum", "radar.min_bin");
    mount.validate();
    if (!(fusion.camera.frame_period_s() >= fusion.tick_s)) {
        throw ConfigurationError("tick must not exceed the camera frame period", "simulation.tick_s");
    }
    calibration.resolve(path);
}

SensorState ScenarioConfig::sensor_at(double level_mm, double t_s) const {
    return {level_mm, model.physics, model.antenna, conveyor_position(path, t_s)};
}

PanTiltState ScenarioConfig::initial_mount() const {
    const MountAngles bearing = pointing_at(path.start_point);
    return PanTiltState::at_rest(mount, {bearing.pan_deg + initial_offset.pan_deg,
                                         bearing.tilt_deg + initial_offset.tilt_deg});
}

CalibrationCurve ScenarioConfig::calibrate() const {
    const auto levels = level_sweep(kCalibrationMaxLevelMm, model.physics.level_step_mm);
    return build_calibration(calibration.resolve(path), model, levels);
}

std::optional<ScenarioConfig> builtin_scenario(const std::string& name) {
    if (name == "scenario1") return scenario1();
    if (name == "scenario2") return scenario2();
    return std::nullopt;
}

ScenarioConfig parse_scenario_json(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigurationError(fmt::format("invalid JSON: {}", e.what()));
    }
    if (!root.is_object()) throw ConfigurationError("expected an object", "<root>");

    std::string base = "scenario1";
    if (const auto it = root.find("base"); it != root.end()) {
        if (!it->is_string()) throw ConfigurationError("expected a string", "base");
        base = it->get<std::string>();
        root.erase("base");
    }
    auto cfg = builtin_scenario(base);
    if (!cfg) throw ConfigurationError("unknown built-in scenario \"" + base + "\"", "base");

    Reader reader(root, "");
    visit(reader, *cfg);
    reader.finish();
    cfg->validate();
    return *cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario_json(text.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    ScenarioConfig copy = cfg;
    Json root;
    Writer writer(root);
    visit(writer, copy);
    return root.dump(2) + "\n";
}

}  // namespace orf
