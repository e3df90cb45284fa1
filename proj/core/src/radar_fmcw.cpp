#include "orf/radar_fmcw.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fft.hpp"
#include "orf/errors.hpp"

namespace orf {

namespace {

double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
double power_to_db(double p) { return 10.0 * std::log10(p); }

void check_tone_range(const ChirpConfig& cfg, double range_m) {
    if (!(range_m > 0.0)) {
        throw DegenerateInput("echo range must be positive");
    }
    if (range_m >= max_unambiguous_range(cfg)) {
        throw AliasRisk("echo at " + std::to_string(range_m) + " m is beyond the unambiguous range of " +
                        std::to_string(max_unambiguous_range(cfg)) + " m");
    }
}

// |W(j)|² / |W(0)|² summed over j = -1, 0, 1 for an on-bin tone.
double band_gain(Window window, std::size_t n) {
    const auto w = window_coefficients(window, n);
    auto response = [&](int j) {
        std::complex<double> acc{};
        for (std::size_t i = 0; i < n; ++i) {
            const double phase = -2.0 * std::numbers::pi * j * static_cast<double>(i) / static_cast<double>(n);
            acc += w[i] * std::polar(1.0, phase);
        }
        return std::norm(acc);
    };
    const double centre = response(0);
    return (response(-1) + centre + response(1)) / centre;
}

}  // namespace

void ChirpConfig::validate() const {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigurationError("must be positive", field);
    };
    positive(carrier_hz, "radar.carrier_hz");
    positive(bandwidth_hz, "radar.bandwidth_hz");
    positive(chirp_duration_s, "radar.chirp_duration_s");
    positive(tx_gain_dbi, "radar.tx_gain_dbi");
    positive(rx_gain_dbi, "radar.rx_gain_dbi");
    positive(tx_power_dbm, "radar.tx_power_dbm");
    positive(az_hpbw_deg, "radar.az_hpbw_deg");
    positive(el_hpbw_deg, "radar.el_hpbw_deg");
    positive(speed_of_light_mps, "radar.speed_of_light_mps");
    if (num_samples < 4 || (num_samples & (num_samples - 1)) != 0) {
        throw ConfigurationError("must be a power of two >= 4", "radar.num_samples");
    }
    if (bandwidth_hz >= carrier_hz) {
        throw ConfigurationError("bandwidth must be below the carrier frequency", "radar.bandwidth_hz");
    }
}

double beat_frequency_hz(const ChirpConfig& cfg, double range_m) {
    return 4.0 * cfg.bandwidth_hz * range_m / (cfg.speed_of_light_mps * cfg.chirp_duration_s);
}

double range_from_beat(const ChirpConfig& cfg, double beat_hz) {
    return beat_hz * cfg.speed_of_light_mps * cfg.chirp_duration_s / (4.0 * cfg.bandwidth_hz);
}

double range_resolution(const ChirpConfig& cfg) { return cfg.speed_of_light_mps / (2.0 * cfg.bandwidth_hz); }

double max_unambiguous_range(const ChirpConfig& cfg) { return range_from_beat(cfg, cfg.sample_rate_hz() / 2.0); }

std::vector<double> synthesize_beat(const ChirpConfig& cfg, std::span<const EchoTarget> targets,
                                    const ClutterModel& clutter, std::mt19937_64& rng) {
    for (const auto& t : targets) check_tone_range(cfg, t.range_m);
    for (const auto& t : clutter.tones) check_tone_range(cfg, t.range_m);

    const std::size_t n = cfg.num_samples;
    const double fs = cfg.sample_rate_hz();
    std::vector<double> samples(n, 0.0);

    auto add_tone = [&](const EchoTarget& t) {
        const double amplitude = std::pow(10.0, t.level_db / 20.0);
        const double omega = 2.0 * std::numbers::pi * beat_frequency_hz(cfg, t.range_m) / fs;
        for (std::size_t k = 0; k < n; ++k) {
            samples[k] += amplitude * std::cos(omega * static_cast<double>(k) + t.phase_rad);
        }
    };
    for (const auto& t : targets) add_tone(t);
    for (const auto& t : clutter.tones) add_tone(t);

    if (clutter.has_floor()) {
        const double sigma = std::pow(10.0, clutter.floor_db / 20.0) / std::numbers::sqrt2;
        std::normal_distribution<double> noise(0.0, sigma);
        for (auto& s : samples) s += noise(rng);
    }
    return samples;
}

std::vector<double> synthesize_beat(const ChirpConfig& cfg, std::span<const EchoTarget> targets,
                                    const ClutterModel& clutter, std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    return synthesize_beat(cfg, targets, clutter, rng);
}

std::vector<double> window_coefficients(Window window, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (window == Window::hann) {
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
        }
    }
    return w;
}

BeatSpectrum beat_spectrum(const ChirpConfig& cfg, std::span<const double> samples, Window window) {
    const std::size_t n = cfg.num_samples;
    if (samples.size() != n) {
        throw DegenerateInput("beat_spectrum: expected " + std::to_string(n) + " samples, got " +
                              std::to_string(samples.size()));
    }
    const auto w = window_coefficients(window, n);
    BeatSpectrum out;
    out.bin_hz = cfg.bin_hz();
    out.window = window;
    std::vector<double> windowed(n);
    for (std::size_t i = 0; i < n; ++i) {
        windowed[i] = samples[i] * w[i];
        out.window_sum += w[i];
        out.window_power_sum += w[i] * w[i];
    }

    std::vector<std::complex<double>> bins;
    detail::real_fft(n).forward(windowed, bins);

    const double scale = 2.0 / out.window_sum;
    out.magnitudes_db.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double mag = std::abs(bins[k]) * scale;
        out.magnitudes_db[k] = mag > 0.0 ? std::max(20.0 * std::log10(mag), kSpectrumFloorDb) : kSpectrumFloorDb;
    }
    return out;
}

BeatSpectrum average_spectra(std::span<const BeatSpectrum> spectra) {
    if (spectra.empty()) {
        throw DegenerateInput("average_spectra: no spectra");
    }
    BeatSpectrum out = spectra.front();
    std::vector<double> acc(out.size(), 0.0);
    for (const auto& s : spectra) {
        if (s.size() != out.size()) throw DegenerateInput("average_spectra: mismatched spectrum sizes");
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += db_to_power(s.magnitudes_db[k]);
    }
    const double inv = 1.0 / static_cast<double>(spectra.size());
    for (std::size_t k = 0; k < acc.size(); ++k) {
        out.magnitudes_db[k] = std::max(power_to_db(acc[k] * inv), kSpectrumFloorDb);
    }
    return out;
}

SpectralPeak peak_beat_frequency(const BeatSpectrum& spectrum, std::size_t min_bin) {
    if (min_bin < 1) {
        throw DegenerateInput("peak search must exclude the DC bin");
    }
    if (spectrum.magnitudes_db.empty() || min_bin >= spectrum.size()) {
        throw DegenerateInput("peak search range is empty");
    }
    std::size_t best = min_bin;
    for (std::size_t k = min_bin + 1; k < spectrum.size(); ++k) {
        if (spectrum.magnitudes_db[k] > spectrum.magnitudes_db[best]) best = k;
    }
    return {best, spectrum.frequency_hz(best), spectrum.magnitudes_db[best]};
}

double band_level_db(const BeatSpectrum& spectrum, std::size_t centre_bin) {
    if (centre_bin >= spectrum.size()) {
        throw DegenerateInput("band_level_db: bin out of range");
    }
    const std::size_t lo = centre_bin == 0 ? 0 : centre_bin - 1;
    const std::size_t hi = std::min(centre_bin + 1, spectrum.size() - 1);
    double acc = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) acc += db_to_power(spectrum.magnitudes_db[k]);
    return power_to_db(acc / band_gain(spectrum.window, 2 * spectrum.size()));
}

double noise_floor_db(const BeatSpectrum& spectrum, std::size_t exclude_bin, std::size_t min_bin,
                      std::size_t guard) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t k = min_bin; k < spectrum.size(); ++k) {
        const std::size_t dist = k > exclude_bin ? k - exclude_bin : exclude_bin - k;
        if (dist <= guard) continue;
        acc += db_to_power(spectrum.magnitudes_db[k]);
        ++count;
    }
    if (count == 0) {
        throw DegenerateInput("noise_floor_db: no bins left after exclusion");
    }
    return power_to_db(acc / static_cast<double>(count));
}

double bin_noise_gain_db(Window window, std::size_t num_samples) {
    const auto w = window_coefficients(window, num_samples);
    double sum = 0.0, sum_sq = 0.0;
    for (double v : w) {
        sum += v;
        sum_sq += v * v;
    }
    // Noise variance σ² = A_F²/2; scaled bin power = 4σ²Σw²/(Σw)².
    return power_to_db(2.0 * sum_sq / (sum * sum));
}

double band_noise_gain_db(Window window, std::size_t num_samples) {
    return bin_noise_gain_db(window, num_samples) + power_to_db(3.0 / band_gain(window, num_samples));
}

double expected_band_level_db(double echo_db, const ClutterModel& clutter, Window window,
                              std::size_t num_samples) {
    double power = db_to_power(echo_db);
    if (clutter.has_floor()) power += db_to_power(clutter.floor_db + band_noise_gain_db(window, num_samples));
    return power_to_db(power);
}

double radar_pattern_gain_db(const ChirpConfig& cfg, const RelativeAngles& offset) {
    return 2.0 * gaussian_beam_gain_db(offset, cfg.az_hpbw_deg, cfg.el_hpbw_deg);
}

double geometric_gain_db(const ChirpConfig& cfg, const SensorAntenna& antenna, const Vec3& sensor_position,
                         const MountAngles& radar_pointing, const LinkBudget& link) {
    const double range = sensor_position.norm();
    if (!(range > 0.0)) {
        throw DegenerateInput("sensor coincides with the radar");
    }
    const OrientedFrame beam = OrientedFrame::from_angles(radar_pointing);
    if (!beam.in_front(sensor_position)) {
        throw DegenerateInput("sensor lies behind the radar");
    }
    const double pattern = radar_pattern_gain_db(cfg, beam.relative_angles(sensor_position));
    const double aspect = aspect_gain_db(antenna, -sensor_position).gain_db;
    return pattern + 2.0 * aspect - 40.0 * std::log10(range / link.reference_range_m);
}

double link_echo_db(const ChirpConfig& cfg, const SensorState& sensor, const MountAngles& radar_pointing,
                    const LinkBudget& link) {
    return link.anchor_db + geometric_gain_db(cfg, sensor.antenna, sensor.position, radar_pointing, link) -
           modulation_loss_db(sensor.physics, sensor.level_mm, link.modulation_slope_db_per_mm);
}

}  // namespace orf
