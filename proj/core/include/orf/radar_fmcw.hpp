#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "orf/geometry.hpp"
#include "orf/sensor_model.hpp"

namespace orf {

/// FMCW radar parameters. The dechirped signal is simulated directly at
/// baseband, so the carrier only enters through validation.
struct ChirpConfig {
    double carrier_hz{24e9};
    double bandwidth_hz{2e9};
    double chirp_duration_s{0.015};
    std::size_t num_samples{256};
    double tx_gain_dbi{28.0};
    double rx_gain_dbi{20.0};
    double tx_power_dbm{20.0};
    double az_hpbw_deg{12.0};
    double el_hpbw_deg{9.0};
    double speed_of_light_mps{299'792'458.0};

    void validate() const;

    double sample_rate_hz() const { return static_cast<double>(num_samples) / chirp_duration_s; }
    double bin_hz() const { return 1.0 / chirp_duration_s; }
};

/// Beat frequency of a point echo: f = 4·B·R / (c·T_c).
double beat_frequency_hz(const ChirpConfig& cfg, double range_m);
/// Inverse of beat_frequency_hz: R = f·c·T_c / (4·B).
double range_from_beat(const ChirpConfig& cfg, double beat_hz);
/// c / (2·B).
double range_resolution(const ChirpConfig& cfg);
/// Range whose beat tone sits at the Nyquist frequency of the sampled chirp.
double max_unambiguous_range(const ChirpConfig& cfg);

struct EchoTarget {
    double range_m{0.0};
    double level_db{0.0};  ///< 20·log10 of the tone amplitude
    double phase_rad{0.0};
};

/// Stationary clutter: white Gaussian floor plus optional fixed reflectors.
///
/// `floor_db` is the clutter power expressed as the level of a tone carrying
/// the same power, so an echo with level_db == floor_db has unit per-sample SNR.
struct ClutterModel {
    double floor_db{-300.0};
    std::vector<EchoTarget> tones;

    bool has_floor() const { return floor_db > -299.0; }
};

/// Sum-of-sinusoids dechirped signal plus clutter. Throws AliasRisk when a
/// target or clutter tone lies at or beyond max_unambiguous_range().
std::vector<double> synthesize_beat(const ChirpConfig& cfg, std::span<const EchoTarget> targets,
                                    const ClutterModel& clutter, std::mt19937_64& rng);
std::vector<double> synthesize_beat(const ChirpConfig& cfg, std::span<const EchoTarget> targets,
                                    const ClutterModel& clutter, std::uint64_t rng_seed);

enum class Window { rectangular, hann };

/// Periodic window coefficients of length n.
std::vector<double> window_coefficients(Window window, std::size_t n);

inline constexpr double kSpectrumFloorDb = -120.0;

/// Single-sided spectrum, bins 0..N/2-1. Magnitudes are scaled by 2/Σw so a
/// tone of amplitude A centred on a bin reads 20·log10(A).
struct BeatSpectrum {
    double bin_hz{0.0};
    std::vector<double> magnitudes_db;
    Window window{Window::hann};
    double window_sum{0.0};        ///< Σw
    double window_power_sum{0.0};  ///< Σw²

    std::size_t size() const { return magnitudes_db.size(); }
    double frequency_hz(std::size_t bin) const { return bin_hz * static_cast<double>(bin); }
};

/// Throws DegenerateInput when the sample count differs from cfg.num_samples.
BeatSpectrum beat_spectrum(const ChirpConfig& cfg, std::span<const double> samples, Window window);

/// Bin-wise power average of spectra sharing the same layout.
BeatSpectrum average_spectra(std::span<const BeatSpectrum> spectra);

struct SpectralPeak {
    std::size_t bin{0};
    double frequency_hz{0.0};
    double level_db{0.0};
};

/// Strongest bin at index >= min_bin; ties go to the lower bin.
SpectralPeak peak_beat_frequency(const BeatSpectrum& spectrum, std::size_t min_bin);

/// Echo level from the peak bin and its two neighbours, normalized so an
/// on-bin tone reads its own level. The three-bin sum keeps the Hann
/// scalloping loss below 0.1 dB, where the single peak bin loses up to 1.4 dB.
double band_level_db(const BeatSpectrum& spectrum, std::size_t centre_bin);

/// Mean per-bin power (dB) over bins >= min_bin, skipping `guard` bins either
/// side of `exclude_bin`.
double noise_floor_db(const BeatSpectrum& spectrum, std::size_t exclude_bin, std::size_t min_bin,
                      std::size_t guard = 3);

/// Expected per-bin reading of a clutter floor, relative to ClutterModel::floor_db.
double bin_noise_gain_db(Window window, std::size_t num_samples);
/// Expected band_level_db reading of a clutter floor, relative to ClutterModel::floor_db.
double band_noise_gain_db(Window window, std::size_t num_samples);

/// Noise-free expectation of band_level_db for an echo over the clutter floor
/// (powers add in the peak bins).
double expected_band_level_db(double echo_db, const ClutterModel& clutter, Window window,
                              std::size_t num_samples);

/// Parameters tying the relative link model to an absolute echo level.
struct LinkBudget {
    double anchor_db{-20.0};          ///< echo of an empty, aligned sensor at reference_range_m
    double reference_range_m{3.5};
    double modulation_slope_db_per_mm{6.0};
};

/// Two-way radar pattern loss (Tx + Rx) for a target at `offset` from the beam axis.
double radar_pattern_gain_db(const ChirpConfig& cfg, const RelativeAngles& offset);

/// All geometry-dependent terms of the echo: radar pattern (Tx + Rx), sensor
/// aspect on both horns, and the R⁴ spreading loss relative to the reference
/// range. The radar sits at the origin looking along `radar_pointing`.
double geometric_gain_db(const ChirpConfig& cfg, const SensorAntenna& antenna, const Vec3& sensor_position,
                         const MountAngles& radar_pointing, const LinkBudget& link);

/// anchor + geometric_gain_db - modulation_loss_db.
double link_echo_db(const ChirpConfig& cfg, const SensorState& sensor, const MountAngles& radar_pointing,
                    const LinkBudget& link);

}  // namespace orf
