#pragma once

#include "ramemit/error.hpp"
#include "ramemit/frames.hpp"
#include "ramemit/waveform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ramemit {

/// Slicing rule for turning amplitudes into per-sample bits.
struct ThresholdMode {
    enum class Kind { midpoint, fixed };
    Kind kind = Kind::midpoint;
    double level = 0.0;  ///< only used by Kind::fixed

    static ThresholdMode midpoint() { return {}; }
    static ThresholdMode fixed(double level) { return {Kind::fixed, level}; }
};

struct DemodConfig {
    SymbolTiming timing;
    LineCode scheme = LineCode::ook_direct;
    std::size_t smooth_window = 1;  ///< moving-average length, 1..samples_per_halfbit
    double sync_tolerance = 0.0;    ///< max mismatching fraction of the preamble template, [0, 0.5)
    ThresholdMode threshold = ThresholdMode::midpoint();
    /// Known-length mode for BER testing: slice exactly this many payload bits
    /// instead of trusting the received length field.
    std::optional<std::size_t> payload_bits_hint;

    void validate() const;
};

/// Centered moving average; edge samples average over the part of the window
/// that exists. Length is preserved.
EnvelopeSignal smooth(const EnvelopeSignal& signal, std::size_t window);

/// MIDPOINT cut: halfway between the 5th and 95th percentile of the samples.
/// Throws ErrorKind::no_signal when those percentiles are closer than 1e-9.
double midpoint_cut(const EnvelopeSignal& signal);

/// One bit per sample: 1 where sample >= cut.
BitStream threshold(const EnvelopeSignal& signal, const ThresholdMode& mode);

/// Earliest sample index at or after `from` where the line-coded preamble
/// template matches within cfg.sync_tolerance, refined to the best-matching
/// offset within one template length of that point (earliest on ties). Throws ErrorKind::sync when no
/// position qualifies.
std::size_t find_preamble(const BitStream& sample_bits, const DemodConfig& cfg, std::size_t from = 0);

/// Raised by slice_symbols when the stream ends before `count` symbols; the
/// symbols decided so far are kept.
class TruncatedSymbols : public Error {
public:
    explicit TruncatedSymbols(BitStream partial)
        : Error(ErrorKind::truncation,
                "signal ends after " + std::to_string(partial.size()) + " symbols"),
          partial_(std::move(partial)) {}

    const BitStream& partial() const noexcept { return partial_; }

private:
    BitStream partial_;
};

/// Majority vote over the central half of each symbol window (bit windows for
/// OOK, half-bit windows for Manchester). A tied vote decides 0.
BitStream slice_symbols(const BitStream& sample_bits, std::size_t start, const DemodConfig& cfg, std::size_t count);

struct FrameStats {
    double mean_on = 0.0;
    double mean_off = 0.0;
    double est_snr_db = 0.0;         ///< +inf when the OFF windows are noise free
    std::size_t code_violations = 0; ///< Manchester pairs that were (0,0) or (1,1)
};

struct DecodedFrame {
    Frame frame;
    std::size_t start_sample = 0;
    std::size_t end_sample = 0;  ///< one past the last sample of the frame
    bool crc_valid = false;
    FrameStats stats;
};

/// A per-frame failure recorded while scanning; the scan continues past it.
struct DecodeIssue {
    ErrorKind kind = ErrorKind::sync;
    std::size_t sample = 0;
    std::string message;
};

struct DecodeResult {
    std::vector<DecodedFrame> frames;  ///< strictly increasing start_sample
    BitStream raw_bits;                ///< line-coded symbols of every recovered frame
    std::vector<DecodeIssue> issues;
};

/// smooth -> threshold -> find_preamble -> slice_symbols -> line decode ->
/// parse_frame, repeated until no further preamble is found. After each frame
/// (or failed frame) the search resumes one bit time past it.
///
/// Manchester pairs that violate the code are resolved by comparing the mean
/// smoothed level of their two halves and counted in FrameStats.
DecodeResult demodulate(const EnvelopeSignal& signal, const DemodConfig& cfg);

}  // namespace ramemit
