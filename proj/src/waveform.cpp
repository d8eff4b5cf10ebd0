#include "ramemit/waveform.hpp"

#include "ramemit/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ramemit {

SymbolTiming SymbolTiming::from_ms(double bit_time_ms, double sample_rate)
{
    if (!(bit_time_ms > 0.0) || !std::isfinite(bit_time_ms)) {
        throw Error(ErrorKind::config, "bit time must be positive");
    }
    double us = bit_time_ms * 1000.0;
    auto rounded = std::llround(us);
    if (std::abs(us - static_cast<double>(rounded)) > 1e-6) {
        throw Error(ErrorKind::config, "bit time must be a whole number of microseconds");
    }
    SymbolTiming t{rounded, sample_rate};
    t.validate();
    return t;
}

std::int64_t SymbolTiming::symbol_us(LineCode scheme) const
{
    if (scheme == LineCode::ook_direct) return bit_time_us;
    if (bit_time_us % 2 != 0) {
        throw Error(ErrorKind::config, "manchester needs an even bit time in microseconds");
    }
    return bit_time_us / 2;
}

double SymbolTiming::samples_per_symbol(LineCode scheme) const
{
    return sample_rate * static_cast<double>(symbol_us(scheme)) / 1e6;
}

void SymbolTiming::validate() const
{
    if (bit_time_us <= 0) throw Error(ErrorKind::config, "bit time must be positive");
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw Error(ErrorKind::config, "sample rate must be positive");
    }
    if (samples_per_halfbit() < 4.0) {
        throw Error(ErrorKind::config, "only " + std::to_string(samples_per_halfbit()) +
                                           " samples per half-bit; at least 4 are required");
    }
}

std::int64_t ActivitySchedule::total_us() const noexcept
{
    std::int64_t total = 0;
    for (const auto& iv : intervals) total += iv.duration_us;
    return total;
}

void ActivitySchedule::append(const ActivitySchedule& other)
{
    intervals.insert(intervals.end(), other.intervals.begin(), other.intervals.end());
}

void ActivitySchedule::append_silence(std::int64_t duration_us)
{
    if (duration_us > 0) intervals.push_back({Activity::off, duration_us});
}

void EnvelopeSignal::check_finite() const
{
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) {
            throw Error(ErrorKind::format, "non-finite sample at index " + std::to_string(i));
        }
    }
}

ActivitySchedule schedule_from_symbols(const BitStream& symbols, const SymbolTiming& timing, LineCode scheme)
{
    ActivitySchedule out;
    if (symbols.empty()) return out;
    const std::int64_t unit = timing.symbol_us(scheme);
    for (auto s : symbols.bits()) {
        Activity state = s ? Activity::on : Activity::off;
        if (!out.intervals.empty() && out.intervals.back().state == state) {
            out.intervals.back().duration_us += unit;
        } else {
            out.intervals.push_back({state, unit});
        }
    }
    return out;
}

std::size_t sample_index_at(std::int64_t elapsed_us, double sample_rate)
{
    return static_cast<std::size_t>(std::llround(static_cast<double>(elapsed_us) * sample_rate / 1e6));
}

namespace {

template <typename T, typename Level>
std::vector<T> render(const ActivitySchedule& schedule, double sample_rate, Level level)
{
    std::vector<T> out(sample_index_at(schedule.total_us(), sample_rate));
    std::int64_t elapsed = 0;
    std::size_t begin = 0;
    for (const auto& iv : schedule.intervals) {
        elapsed += iv.duration_us;
        std::size_t end = sample_index_at(elapsed, sample_rate);
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(begin), out.begin() + static_cast<std::ptrdiff_t>(end),
                  level(iv.state));
        begin = end;
    }
    return out;
}

}  // namespace

EnvelopeSignal synthesize_envelope(const ActivitySchedule& schedule, double sample_rate, double amplitude)
{
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
        throw Error(ErrorKind::config, "amplitude must be positive");
    }
    if (!(sample_rate > 0.0)) throw Error(ErrorKind::config, "sample rate must be positive");
    EnvelopeSignal sig;
    sig.sample_rate = sample_rate;
    sig.samples = render<double>(schedule, sample_rate,
                                 [amplitude](Activity a) { return a == Activity::on ? amplitude : 0.0; });
    return sig;
}

std::vector<std::uint8_t> activity_mask(const ActivitySchedule& schedule, double sample_rate)
{
    return render<std::uint8_t>(schedule, sample_rate,
                                [](Activity a) { return static_cast<std::uint8_t>(a == Activity::on); });
}

ActivitySchedule schedule_frame(const Frame& frame, const SymbolTiming& timing, LineCode scheme)
{
    return schedule_from_symbols(line_encode(frame.serialize(), scheme), timing, scheme);
}

double TimingReport::total_measured_us() const noexcept
{
    if (intervals.empty()) return 0.0;
    return static_cast<double>((intervals.back().end - intervals.front().start).count()) / 1000.0;
}

double TimingReport::jitter_p99_us(std::int64_t min_us) const
{
    std::vector<double> dev;
    for (const auto& iv : intervals) {
        if (iv.requested_us >= min_us) dev.push_back(std::abs(iv.measured_us() - static_cast<double>(iv.requested_us)));
    }
    if (dev.empty()) return 0.0;
    std::sort(dev.begin(), dev.end());
    auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(dev.size()))) - 1;
    return dev[std::min(rank, dev.size() - 1)];
}

}  // namespace ramemit
