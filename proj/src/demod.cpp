#include "ramemit/demod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace ramemit {

void DemodConfig::validate() const
{
    timing.validate();
    // Manchester with an odd microsecond bit time is rejected here.
    (void)timing.symbol_us(scheme);
    if (smooth_window < 1 || static_cast<double>(smooth_window) > timing.samples_per_halfbit()) {
        throw Error(ErrorKind::config, "smooth window must be between 1 and the samples per half-bit");
    }
    if (!(sync_tolerance >= 0.0 && sync_tolerance < 0.5)) {
        throw Error(ErrorKind::config, "sync tolerance must be in [0, 0.5)");
    }
    if (payload_bits_hint && *payload_bits_hint > max_payload_bits) {
        throw Error(ErrorKind::config, "payload hint exceeds the frame limit");
    }
}

EnvelopeSignal smooth(const EnvelopeSignal& signal, std::size_t window)
{
    if (window < 1) throw Error(ErrorKind::config, "smooth window must be at least 1");
    EnvelopeSignal out;
    out.sample_rate = signal.sample_rate;
    if (window == 1) {
        out.samples = signal.samples;
        return out;
    }
    const std::size_t n = signal.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + signal.samples[i];

    const std::size_t left = (window - 1) / 2;
    const std::size_t right = window - 1 - left;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i >= left ? i - left : 0;
        std::size_t hi = std::min(n, i + right + 1);
        out.samples[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    }
    return out;
}

double midpoint_cut(const EnvelopeSignal& signal)
{
    if (signal.empty()) throw Error(ErrorKind::no_signal, "empty signal");
    std::vector<double> v = signal.samples;
    auto pick = [&v](double q) {
        auto k = static_cast<std::size_t>(std::llround(q * static_cast<double>(v.size() - 1)));
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
        return v[k];
    };
    const double p5 = pick(0.05);
    const double p95 = pick(0.95);
    if (!(p95 - p5 >= 1e-9)) {
        throw Error(ErrorKind::no_signal, "no amplitude spread between the 5th and 95th percentiles");
    }
    return 0.5 * (p5 + p95);
}

BitStream threshold(const EnvelopeSignal& signal, const ThresholdMode& mode)
{
    if (signal.empty()) throw Error(ErrorKind::no_signal, "empty signal");
    const double cut = mode.kind == ThresholdMode::Kind::fixed ? mode.level : midpoint_cut(signal);
    std::vector<std::uint8_t> bits(signal.size());
    std::transform(signal.samples.begin(), signal.samples.end(), bits.begin(),
                   [cut](double s) { return static_cast<std::uint8_t>(s >= cut); });
    return BitStream(std::move(bits));
}

namespace {

/// Prefix counts of a per-sample bit stream.
class MaskIndex {
public:
    explicit MaskIndex(const BitStream& bits) : prefix_(bits.size() + 1, 0)
    {
        for (std::size_t i = 0; i < bits.size(); ++i) prefix_[i + 1] = prefix_[i] + bits[i];
    }

    std::size_t size() const noexcept { return prefix_.size() - 1; }
    std::size_t ones(std::size_t lo, std::size_t hi) const noexcept { return prefix_[hi] - prefix_[lo]; }

private:
    std::vector<std::size_t> prefix_;
};

/// Sample offset of symbol boundary k relative to a frame start.
std::size_t boundary(std::size_t k, double samples_per_symbol)
{
    return static_cast<std::size_t>(std::llround(static_cast<double>(k) * samples_per_symbol));
}

struct Segment {
    std::size_t begin;
    std::size_t end;
    std::uint8_t level;
};

/// Preamble as constant-level sample runs, relative to the frame start.
std::vector<Segment> preamble_template(const DemodConfig& cfg)
{
    const BitStream symbols = line_encode(preamble(), cfg.scheme);
    const double sps = cfg.timing.samples_per_symbol(cfg.scheme);
    std::vector<Segment> segs;
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        std::size_t b0 = boundary(k, sps);
        std::size_t b1 = boundary(k + 1, sps);
        if (!segs.empty() && segs.back().level == symbols[k]) {
            segs.back().end = b1;
        } else {
            segs.push_back({b0, b1, symbols[k]});
        }
    }
    return segs;
}

std::size_t mismatches(const MaskIndex& mask, const std::vector<Segment>& segs, std::size_t at)
{
    std::size_t miss = 0;
    for (const auto& s : segs) {
        std::size_t ones = mask.ones(at + s.begin, at + s.end);
        miss += s.level ? (s.end - s.begin) - ones : ones;
    }
    return miss;
}

std::size_t find_preamble_indexed(const MaskIndex& mask, const DemodConfig& cfg, std::size_t from)
{
    const auto segs = preamble_template(cfg);
    const std::size_t len = segs.back().end;
    const std::size_t n = mask.size();
    if (n < len || from > n - len) throw Error(ErrorKind::sync, "no preamble: signal too short");
    const auto allowed = static_cast<std::size_t>(std::floor(cfg.sync_tolerance * static_cast<double>(len)));
    const std::size_t last = n - len;

    for (std::size_t s = from; s <= last; ++s) {
        std::size_t miss = mismatches(mask, segs, s);
        if (miss > allowed) continue;
        // The preamble is periodic, so an offset a few symbols early can still
        // qualify. Take the best match within one template length.
        const std::size_t reach = len;
        std::size_t best = s;
        std::size_t best_miss = miss;
        for (std::size_t t = s + 1; t <= std::min(last, s + reach) && best_miss > 0; ++t) {
            std::size_t m = mismatches(mask, segs, t);
            if (m < best_miss) {
                best = t;
                best_miss = m;
            }
        }
        return best;
    }
    throw Error(ErrorKind::sync, "no preamble within tolerance");
}

struct SymbolWindow {
    std::size_t begin;
    std::size_t count;
};

/// Central half of symbol k.
SymbolWindow central_window(std::size_t start, std::size_t k, double sps)
{
    const std::size_t b0 = start + boundary(k, sps);
    const std::size_t b1 = start + boundary(k + 1, sps);
    const std::size_t len = b1 - b0;
    return {b0 + len / 4, std::max<std::size_t>(1, len / 2)};
}

BitStream slice_indexed(const MaskIndex& mask, std::size_t start, const DemodConfig& cfg, std::size_t count)
{
    const double sps = cfg.timing.samples_per_symbol(cfg.scheme);
    std::vector<std::uint8_t> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        auto w = central_window(start, k, sps);
        if (w.begin + w.count > mask.size()) throw TruncatedSymbols(BitStream(std::move(out)));
        // Ties go to 0.
        out.push_back(static_cast<std::uint8_t>(2 * mask.ones(w.begin, w.begin + w.count) > w.count));
    }
    return BitStream(std::move(out));
}

double window_mean(std::span<const double> prefix, SymbolWindow w)
{
    return (prefix[w.begin + w.count] - prefix[w.begin]) / static_cast<double>(w.count);
}

struct LineDecoded {
    BitStream bits;
    std::size_t violations = 0;
};

LineDecoded decode_symbols(const BitStream& symbols, std::size_t start, const DemodConfig& cfg,
                           std::span<const double> smooth_prefix)
{
    if (cfg.scheme == LineCode::ook_direct) return {symbols, 0};
    const double sps = cfg.timing.samples_per_symbol(cfg.scheme);
    LineDecoded out;
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() / 2);
    for (std::size_t i = 0; i + 1 < symbols.size(); i += 2) {
        if (symbols[i] != symbols[i + 1]) {
            bits.push_back(symbols[i + 1]);
            continue;
        }
        ++out.violations;
        double first = window_mean(smooth_prefix, central_window(start, i, sps));
        double second = window_mean(smooth_prefix, central_window(start, i + 1, sps));
        bits.push_back(static_cast<std::uint8_t>(second > first));
    }
    out.bits = BitStream(std::move(bits));
    return out;
}

FrameStats frame_stats(const EnvelopeSignal& raw, const BitStream& symbols, std::size_t start, double sps)
{
    double on_sum = 0.0, off_sum = 0.0, off_sq = 0.0;
    std::size_t on_n = 0, off_n = 0;
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        auto w = central_window(start, k, sps);
        for (std::size_t i = w.begin; i < w.begin + w.count; ++i) {
            const double x = raw.samples[i];
            if (symbols[k]) {
                on_sum += x;
                ++on_n;
            } else {
                off_sum += x;
                off_sq += x * x;
                ++off_n;
            }
        }
    }
    FrameStats st;
    st.mean_on = on_n ? on_sum / static_cast<double>(on_n) : 0.0;
    st.mean_off = off_n ? off_sum / static_cast<double>(off_n) : 0.0;
    const double off_var = off_n ? off_sq / static_cast<double>(off_n) - st.mean_off * st.mean_off : 0.0;
    st.est_snr_db = off_var > 1e-300 ? 10.0 * std::log10(st.mean_on * st.mean_on / off_var)
                                     : std::numeric_limits<double>::infinity();
    return st;
}

}  // namespace

std::size_t find_preamble(const BitStream& sample_bits, const DemodConfig& cfg, std::size_t from)
{
    cfg.validate();
    return find_preamble_indexed(MaskIndex(sample_bits), cfg, from);
}

BitStream slice_symbols(const BitStream& sample_bits, std::size_t start, const DemodConfig& cfg, std::size_t count)
{
    cfg.validate();
    return slice_indexed(MaskIndex(sample_bits), start, cfg, count);
}

DecodeResult demodulate(const EnvelopeSignal& signal, const DemodConfig& cfg)
{
    cfg.validate();
    DecodeResult result;
    const EnvelopeSignal smoothed = smooth(signal, cfg.smooth_window);
    BitStream bits;
    try {
        bits = threshold(smoothed, cfg.threshold);
    } catch (const Error& e) {
        result.issues.push_back({e.kind(), 0, e.what()});
        return result;
    }
    const MaskIndex mask(bits);
    std::vector<double> smooth_prefix(smoothed.size() + 1, 0.0);
    for (std::size_t i = 0; i < smoothed.size(); ++i) smooth_prefix[i + 1] = smooth_prefix[i] + smoothed.samples[i];

    const std::size_t per_bit = symbols_per_bit(cfg.scheme);
    const double sps = cfg.timing.samples_per_symbol(cfg.scheme);
    const auto bit_samples = static_cast<std::size_t>(std::llround(sps * static_cast<double>(per_bit)));
    const std::size_t header_bits = preamble_bits + length_field_bits;

    std::size_t pos = 0;
    while (true) {
        std::size_t start = 0;
        try {
            start = find_preamble_indexed(mask, cfg, pos);
        } catch (const Error& e) {
            if (result.frames.empty() && result.issues.empty()) result.issues.push_back({e.kind(), pos, e.what()});
            break;
        }

        try {
            const BitStream header_symbols = slice_indexed(mask, start, cfg, header_bits * per_bit);
            const auto header = decode_symbols(header_symbols, start, cfg, smooth_prefix);
            const std::size_t payload_len =
                cfg.payload_bits_hint.value_or(header.bits.read_uint(preamble_bits, length_field_bits));
            const std::size_t total_symbols = (header_bits + payload_len + crc_bits) * per_bit;

            const BitStream symbols = slice_indexed(mask, start, cfg, total_symbols);
            const auto decoded = decode_symbols(symbols, start, cfg, smooth_prefix);
            const auto parsed = parse_frame(decoded.bits, {.check_preamble = false, .payload_bits = payload_len});

            DecodedFrame df;
            df.frame = parsed.frame;
            df.crc_valid = parsed.crc_valid;
            df.start_sample = start;
            df.end_sample = start + boundary(total_symbols, sps);
            df.stats = frame_stats(signal, symbols, start, sps);
            df.stats.code_violations = decoded.violations;
            if (!df.crc_valid) {
                result.issues.push_back({ErrorKind::integrity, start, "frame checksum mismatch"});
            }
            result.raw_bits.append(symbols);
            pos = df.end_sample + bit_samples;
            result.frames.push_back(std::move(df));
        } catch (const Error& e) {
            result.issues.push_back({e.kind(), start, e.what()});
            pos = start + bit_samples;
        }
    }
    return result;
}

}  // namespace ramemit
