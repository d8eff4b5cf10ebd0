#pragma once

#include "ramemit/channel.hpp"
#include "ramemit/demod.hpp"
#include "ramemit/frames.hpp"
#include "ramemit/waveform.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ramemit {

/// Simulation settings shared by sweeps, probes and the CLI round trip.
///
/// The defaults are the calibrated desk-scale channel: SNR anchors come from
/// distance_to_snr, and noise has a fixed correlation time so that shorter
/// bit times average over fewer independent noise samples.
struct SimulationParams {
    /// Sample rate is chosen so the finest bit time in a sweep gets this many
    /// samples per half-bit.
    double samples_per_halfbit = 100.0;
    /// Sample rate override; 0 means derive it from samples_per_halfbit.
    double sample_rate = 0.0;
    double noise_corr_us = 100.0;
    /// Moving-average length as a fraction of the samples per half-bit.
    double smooth_fraction = 0.25;
    double sync_tolerance = 0.35;
    std::size_t lead_silence_bits = 2;
    std::size_t trail_silence_bits = 2;
    double amplitude = 1.0;
    std::optional<JammerConfig> jammer;

    double rate_for(double finest_bit_time_ms) const;
    DemodConfig demod_config(const SymbolTiming& timing, LineCode scheme) const;
};

/// Default simulation rate: 100 samples per half-bit at a 1 ms bit time.
inline constexpr double default_sample_rate = 200000.0;

/// 64-bit mix used to derive independent per-cell and per-trial seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

/// 10 log10(mean ON level^2 / variance of OFF samples) over a known mask.
/// Returns +inf for a noise-free OFF floor. Throws ErrorKind::estimation with
/// fewer than 100 ON or 100 OFF samples.
double estimate_snr(const EnvelopeSignal& signal, std::span<const std::uint8_t> on_mask);

struct TrialOutcome {
    bool synced = false;
    bool crc_valid = false;
    std::size_t bit_errors = 0;
    std::size_t bits = 0;
    double est_snr_db = 0.0;
};

/// One seeded TX -> channel -> RX pass with a random payload.
TrialOutcome run_trial(const BitStream& payload, const SymbolTiming& timing, LineCode scheme, double snr_db,
                       std::uint64_t seed, const SimulationParams& params);

struct SweepSpec {
    std::vector<double> bit_times_ms;
    std::vector<double> distances_cm;
    std::size_t payload_bits = 256;
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    LineCode scheme = LineCode::manchester;
    /// Replaces distance_to_snr for every cell (noise_disabled turns noise off).
    std::optional<double> snr_override_db;
    SimulationParams sim;
    /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;

    void validate() const;
};

struct BerCell {
    double bit_time_ms = 0.0;
    double distance_cm = 0.0;
    double snr_db = 0.0;
    double est_snr_db = 0.0;
    std::size_t bits_sent = 0;   ///< trials * payload_bits
    std::size_t bit_errors = 0;  ///< over frames that synchronized
    std::size_t frames_lost = 0; ///< trials whose preamble was never found
    double ber = 0.0;            ///< bit_errors / bits of synchronized frames
    std::string error;           ///< non-empty when the cell could not run

    std::size_t bits_compared(std::size_t payload_bits) const noexcept
    {
        return bits_sent - frames_lost * payload_bits;
    }
};

struct BerReport {
    std::size_t payload_bits = 0;
    std::size_t trials = 0;
    /// Row-major over (bit time, distance) in SweepSpec order.
    std::vector<BerCell> cells;

    const BerCell* find(double bit_time_ms, double distance_cm) const;
};

BerReport run_sweep(const SweepSpec& spec);

/// A probe whose frame never synchronized delivered nothing, so every payload
/// bit counts as an error.
struct HighRateResult {
    double ber = 0.0;
    std::size_t bit_errors = 0;
    std::size_t bits = 0;
    bool synced = false;
};

/// Single end-to-end pass at bit_time = 1000 / bit_rate_bps ms using the
/// default simulation sample rate. Throws ErrorKind::config when the bit
/// rate is below 1000 bps, does not give a whole-microsecond bit time, or
/// leaves fewer than 4 samples per half-bit.
HighRateResult highrate_probe(std::size_t bit_rate_bps, double snr_db, std::size_t bits, std::uint64_t seed,
                              LineCode scheme = LineCode::manchester, const SimulationParams& params = {});

struct ExfilItem {
    std::string name;
    std::size_t size_bits = 0;
    /// Published reference times in seconds keyed by bit time in ms, where known.
    std::map<double, double> reference_s;
};

struct ExfilTime {
    double payload_s = 0.0;   ///< size_bits * bit_time
    double overhead_s = 0.0;  ///< preamble + length + crc bits * bit_time
    double total_s() const noexcept { return payload_s + overhead_s; }
};

ExfilTime exfil_time(const ExfilItem& item, double bit_time_ms);

/// Standard catalogue: keylogging, RSA-4096 key, biometric record, password,
/// small image, text document.
const std::vector<ExfilItem>& exfil_catalog();

enum class TableFormat { csv, text };

TableFormat parse_table_format(std::string_view name);

/// BER percentages with one decimal. Output is a pure function of the report.
std::string emit_tables(const BerReport& report, TableFormat format);

/// Exfiltration times for each item at each bit time. Cells whose computed
/// time differs from a reference value carry an annotation.
std::string emit_exfil_table(const std::vector<ExfilItem>& items, const std::vector<double>& bit_times_ms,
                             TableFormat format);

}  // namespace ramemit
