#pragma once

#include "ramemit/frames.hpp"

#include <chrono>
#include <cstdint>
#include <vector>

namespace ramemit {

/// Bit duration and synthesis rate shared by transmitter and receiver.
///
/// Durations are integer microseconds so schedules are exactly reproducible.
/// A timing is valid when bit_time > 0, sample_rate > 0 and at least four
/// samples fall in every half-bit.
struct SymbolTiming {
    std::int64_t bit_time_us = 0;
    double sample_rate = 0.0;

    static SymbolTiming from_ms(double bit_time_ms, double sample_rate);

    double bit_time_ms() const noexcept { return static_cast<double>(bit_time_us) / 1000.0; }
    double samples_per_halfbit() const noexcept
    {
        return sample_rate * static_cast<double>(bit_time_us) / 2e6;
    }
    /// Duration of one line-coded symbol: a half-bit for Manchester, a bit for OOK.
    /// Throws a config error for Manchester with an odd bit time.
    std::int64_t symbol_us(LineCode scheme) const;
    double samples_per_symbol(LineCode scheme) const;

    /// Throws ErrorKind::config when an invariant fails.
    void validate() const;
};

enum class Activity : std::uint8_t { off = 0, on = 1 };

struct ActivityInterval {
    Activity state = Activity::off;
    std::int64_t duration_us = 0;

    friend bool operator==(const ActivityInterval&, const ActivityInterval&) = default;
};

/// Timed carrier-on/off intervals. Runs inside one frame are merged; two
/// adjacent intervals with equal state only occur where schedules were
/// concatenated.
struct ActivitySchedule {
    std::vector<ActivityInterval> intervals;

    std::int64_t total_us() const noexcept;
    bool empty() const noexcept { return intervals.empty(); }
    /// Concatenates without merging across the boundary.
    void append(const ActivitySchedule& other);
    void append_silence(std::int64_t duration_us);

    friend bool operator==(const ActivitySchedule&, const ActivitySchedule&) = default;
};

/// Sampled real-valued baseband amplitude.
struct EnvelopeSignal {
    std::vector<double> samples;
    double sample_rate = 0.0;

    std::size_t size() const noexcept { return samples.size(); }
    bool empty() const noexcept { return samples.empty(); }
    /// Throws ErrorKind::format if any sample is NaN or infinite.
    void check_finite() const;
};

/// One interval per maximal run of equal symbols; empty input gives an empty schedule.
ActivitySchedule schedule_from_symbols(const BitStream& symbols, const SymbolTiming& timing, LineCode scheme);

/// Piecewise-constant rendering: ON -> amplitude, OFF -> 0. Interval edges are
/// placed at round(elapsed_us * rate / 1e6) of the running total, so the
/// sample count never drifts from round(total_us * rate / 1e6).
EnvelopeSignal synthesize_envelope(const ActivitySchedule& schedule, double sample_rate, double amplitude = 1.0);

/// Per-sample ON/OFF mask using the same edge placement as synthesize_envelope.
std::vector<std::uint8_t> activity_mask(const ActivitySchedule& schedule, double sample_rate);

/// Sample index at which `elapsed_us` falls under the global rounding rule.
std::size_t sample_index_at(std::int64_t elapsed_us, double sample_rate);

/// Convenience: frame -> line code -> schedule.
ActivitySchedule schedule_frame(const Frame& frame, const SymbolTiming& timing, LineCode scheme);

// ---------------------------------------------------------------------------
// Native timing driver

struct IntervalTiming {
    Activity state = Activity::off;
    std::int64_t requested_us = 0;
    std::chrono::nanoseconds start{0};  ///< relative to the schedule start
    std::chrono::nanoseconds end{0};

    double measured_us() const noexcept { return static_cast<double>((end - start).count()) / 1000.0; }
};

struct TimingReport {
    std::vector<IntervalTiming> intervals;
    std::uint64_t store_passes = 0;  ///< full sweeps of the buffer during ON intervals

    bool empty() const noexcept { return intervals.empty(); }
    double total_measured_us() const noexcept;
    /// 99th percentile of |measured - requested| over intervals of at least `min_us`.
    double jitter_p99_us(std::int64_t min_us = 1000) const;
};

inline constexpr std::size_t default_driver_buffer_bytes = std::size_t{16} << 20;

/// True when the build target can issue cache-bypassing stores.
bool timing_driver_supported() noexcept;

/// Plays a schedule as memory activity: ON intervals issue non-temporal
/// stores over a buffer until the interval deadline, OFF intervals sleep.
/// Deadlines are absolute from the schedule start, so lateness does not
/// accumulate.
///
/// Must run on a dedicated thread; co-scheduled memory-heavy work distorts
/// both the timing and the emission. Throws ErrorKind::capability when the
/// platform has no non-temporal store, ErrorKind::config when the buffer is
/// smaller than 1 MiB.
TimingReport execute_schedule(const ActivitySchedule& schedule,
                              std::size_t buffer_bytes = default_driver_buffer_bytes);

}  // namespace ramemit
