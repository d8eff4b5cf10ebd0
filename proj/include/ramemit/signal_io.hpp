#pragma once

#include "ramemit/frames.hpp"
#include "ramemit/waveform.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>

namespace ramemit {

/// Envelope sidecar: the JSON text written next to an envelope file.
///
/// Timing fields are always present; channel fields are optional and record
/// how a noisy capture was produced.
struct EnvelopeMetadata {
    double sample_rate = 0.0;
    double bit_time_ms = 0.0;
    LineCode scheme = LineCode::ook_direct;
    std::size_t payload_bits = 0;

    std::optional<double> snr_db;
    std::optional<double> distance_cm;
    std::optional<std::uint64_t> seed;
    std::optional<double> jammer_duty_cycle;
    std::optional<double> jammer_burst_ms;
    std::optional<double> jammer_amplitude;

    friend bool operator==(const EnvelopeMetadata&, const EnvelopeMetadata&) = default;
};

/// "<envelope path>.json"
std::filesystem::path sidecar_path(const std::filesystem::path& envelope_path);

/// Raw little-endian IEEE-754 float32, one amplitude per sample.
void write_envelope(const std::filesystem::path& path, const EnvelopeSignal& signal);
/// The sample rate is not stored in the raw file; pass it from the sidecar.
EnvelopeSignal read_envelope(const std::filesystem::path& path, double sample_rate);

std::string metadata_to_json(const EnvelopeMetadata& meta);
EnvelopeMetadata metadata_from_json(std::string_view text);
void write_metadata(const std::filesystem::path& path, const EnvelopeMetadata& meta);
EnvelopeMetadata read_metadata(const std::filesystem::path& path);

/// Interleaved little-endian float32 I,Q pairs, converted to sqrt(I^2 + Q^2).
EnvelopeSignal read_iq_as_envelope(const std::filesystem::path& path, double sample_rate);
void write_iq(const std::filesystem::path& path, std::span<const float> interleaved);

}  // namespace ramemit
