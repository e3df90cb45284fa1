#include "orfsim/cli.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "orf/csv.hpp"
#include "orf/errors.hpp"
#include "orf/harness.hpp"
#include "orf/scenario_config.hpp"

namespace orfsim {

namespace {

// A path that exists is read as JSON; otherwise built-in names are accepted.
orf::ScenarioConfig resolve_config(const std::string& ref) {
    if (std::filesystem::exists(ref)) return orf::load_scenario(ref);
    if (auto builtin = orf::builtin_scenario(ref)) {
        builtin->validate();
        return *builtin;
    }
    throw orf::ConfigurationError("no such file or built-in scenario: " + ref, "--config");
}

void print_nested(std::ostream& err, const std::exception& e, int depth = 0) {
    err << (depth == 0 ? "error: " : "  caused by: ") << e.what() << '\n';
    try {
        std::rethrow_if_nested(e);
    } catch (const std::exception& inner) {
        print_nested(err, inner, depth + 1);
    } catch (...) {
    }
}

}  // namespace

int cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radar/camera fusion simulator for passive temperature sensors", "orfsim"};
    app.require_subcommand(1);

    std::string config_ref;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    bool dump_frames = false;
    auto* run = app.add_subcommand("run", "Simulate every level of a scenario and write trace CSVs");
    run->add_option("--config", config_ref, "Scenario JSON file or built-in name (scenario1, scenario2)")->required();
    run->add_option("--seed", seed, "Base random seed (level i uses seed + i)");
    run->add_option("--out", out_dir, "Output directory");
    run->add_flag("--dump-frames", dump_frames, "Write every camera frame as a PPM image");

    auto* calibrate = app.add_subcommand("calibrate", "Write the calibration curve for the scenario reference");
    calibrate->add_option("--config", config_ref, "Scenario JSON file or built-in name")->required();
    calibrate->add_option("--out", out_dir, "Output directory");

    double range_m = 0.0;
    double level_mm = 0.0;
    std::optional<std::string> spectrum_out;
    auto* spectrum = app.add_subcommand("spectrum", "Dump the beat spectrum of one chirp as CSV");
    spectrum->add_option("--range", range_m, "Sensor range in metres")->required();
    spectrum->add_option("--level", level_mm, "Liquid-metal level in mm")->required();
    spectrum->add_option("--config", config_ref, "Scenario JSON file or built-in name")->default_str("scenario1");
    spectrum->add_option("--seed", seed, "Clutter seed");
    spectrum->add_option("--out", spectrum_out, "Write to this file instead of standard output");

    auto* validate = app.add_subcommand("validate-config", "Check a scenario configuration");
    validate->add_option("config,--config", config_ref, "Scenario JSON file or built-in name")->default_str("scenario1");
    bool print_config = false;
    validate->add_flag("--print", print_config, "Print the resolved configuration as JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return kConfigError;
    }
    if (config_ref.empty()) config_ref = "scenario1";

    try {
        if (run->parsed()) {
            orf::ScenarioConfig cfg = resolve_config(config_ref);
            if (seed) cfg.seed = *seed;
            if (out_dir) cfg.output_dir = *out_dir;
            const orf::MountAngles slew = orf::required_slew_dps(cfg);
            out << fmt::format("{}: {} levels, seed {}, required slew {:.2f}/{:.2f} deg/s (limits {:.1f}/{:.1f})\n",
                               cfg.id, cfg.levels_mm.size(), cfg.seed, slew.pan_deg, slew.tilt_deg,
                               cfg.mount.pan_speed_dps, cfg.mount.tilt_speed_dps);
            const auto runs = orf::run_scenario(cfg, {dump_frames, true});
            for (const auto& r : runs) {
                const auto& s = r.summary;
                out << fmt::format("  level {:.1f} mm  T={:.1f} C  max echo {} dB  mean T^ {} C  ({}/{} ok)\n",
                                   s.level_mm, s.temperature_C, orf::csv::number(s.max_echo_db, 2),
                                   orf::csv::number(s.mean_temperature_C, 1), s.ok_cycles, s.cycles);
            }
            out << "wrote " << cfg.output_dir.string() << '\n';
        } else if (calibrate->parsed()) {
            orf::ScenarioConfig cfg = resolve_config(config_ref);
            if (out_dir) cfg.output_dir = *out_dir;
            const orf::CalibrationCurve curve = orf::run_calibration(cfg);
            out << fmt::format("{}: {} points, dynamic range {:.2f} dB, wrote {}\n", cfg.id, curve.points.size(),
                               curve.dynamic_range_db(), (cfg.output_dir / "calibration.csv").string());
        } else if (spectrum->parsed()) {
            orf::ScenarioConfig cfg = resolve_config(config_ref);
            if (seed) cfg.seed = *seed;
            const std::string text = orf::spectrum_csv(cfg, range_m, level_mm);
            if (spectrum_out) {
                orf::csv::write_file(*spectrum_out, text);
            } else {
                out << text;
            }
        } else if (validate->parsed()) {
            const orf::ScenarioConfig cfg = resolve_config(config_ref);
            const orf::CalibrationCurve curve = cfg.calibrate();
            if (print_config) {
                out << orf::scenario_to_json(cfg);
                return kSuccess;
            }
            out << fmt::format("{}: ok ({} levels, calibration at {}, dynamic range {:.2f} dB)\n", cfg.id,
                               cfg.levels_mm.size(), cfg.calibration.describe(), curve.dynamic_range_db());
        }
    } catch (const orf::ConfigurationError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        print_nested(err, e);
        return kRuntimeError;
    }
    return kSuccess;
}

}  // namespace orfsim
