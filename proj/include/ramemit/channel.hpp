#pragma once

#include "ramemit/waveform.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace ramemit {

/// Passing this as snr_db disables noise entirely.
inline constexpr double noise_disabled = std::numeric_limits<double>::infinity();

/// Random ON/OFF interference from concurrent memory traffic on the
/// transmitting host.
struct JammerConfig {
    double duty_cycle = 0.0;  ///< fraction of time the jammer is active, [0,1]
    double burst_ms = 1.0;    ///< mean burst length, > 0
    double amplitude = 1.0;   ///< added envelope level while active, >= 0

    void validate() const;
};

struct ChannelModel {
    double snr_db = noise_disabled;
    std::uint64_t seed = 0;
    std::optional<JammerConfig> jammer;
    /// Noise correlation time in microseconds; 0 gives white noise. A positive
    /// value shapes the noise as a first-order (AR(1)) process with the same
    /// per-sample variance, standing in for a receiver whose noise bandwidth
    /// is fixed in hertz rather than tied to the sample rate.
    double noise_corr_us = 0.0;

    void validate() const;
};

/// Mean power of the ON-level samples: those at or above half the peak magnitude.
/// Throws ErrorKind::calibration when the signal has no ON samples.
double on_level_power(const EnvelopeSignal& signal);

/// signal + N(0, sigma^2) with sigma^2 = P_on / 10^(snr_db/10). Deterministic in
/// model.seed; output length and rate match the input. The jammer field is
/// ignored here (see apply_channel).
EnvelopeSignal apply_awgn(const EnvelopeSignal& signal, const ChannelModel& model);

/// Adds an alternating ON/OFF envelope with exponentially distributed run
/// lengths (mean ON run = burst_ms, long-run ON fraction = duty_cycle).
EnvelopeSignal apply_jammer(const EnvelopeSignal& signal, const JammerConfig& cfg, std::uint64_t seed);

/// Full propagation path: noise is calibrated on the clean signal, then the
/// jammer (if any) and the noise are added.
EnvelopeSignal apply_channel(const EnvelopeSignal& signal, const ChannelModel& model);

/// Measured average SNR anchors, (distance cm, SNR dB).
inline constexpr std::array<std::pair<double, double>, 8> snr_anchors{{
    {50.0, 38.0},
    {100.0, 30.0},
    {200.0, 27.0},
    {300.0, 22.0},
    {400.0, 17.0},
    {500.0, 15.0},
    {600.0, 12.0},
    {700.0, 8.0},
}};

/// Piecewise-linear interpolation over snr_anchors. Throws ErrorKind::domain
/// outside [50, 700] cm.
double distance_to_snr(double distance_cm);

struct ShieldSpec {
    double sigma = 0.0;  ///< conductivity, S/m
    double d = 0.0;      ///< thickness, m
    double mu = 0.0;     ///< permeability, H/m
    double f = 0.0;      ///< frequency, Hz

    void validate() const;
};

struct Attenuation {
    double attenuation_db = 0.0;  ///< A = 10 log10(1 / (1 + (sigma d / (mu f))^2)), always <= 0
    double shielding_db = 0.0;    ///< |A|
};

/// Evaluates the shielding formula exactly as written. Note that
/// sigma*d/(mu*f) is not dimensionless in SI units, so the magnitudes are
/// small compared with measured shielding of real foils (1 mm copper at
/// 1.6 GHz gives ~29 dB here).
Attenuation faraday_attenuation(const ShieldSpec& spec);

/// [clock, 2 clock, ..., n clock] in GHz, rounded to whole hertz.
std::vector<double> clock_harmonics(double clock_ghz, std::size_t n);

}  // namespace ramemit
