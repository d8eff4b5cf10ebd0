#include "ramemit/error.hpp"
#include "ramemit/waveform.hpp"

#include <cstring>
#include <memory>
#include <thread>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define RAMEMIT_HAVE_MOVNTI 1
#endif

namespace ramemit {

bool timing_driver_supported() noexcept
{
#ifdef RAMEMIT_HAVE_MOVNTI
    return true;
#else
    return false;
#endif
}

#ifdef RAMEMIT_HAVE_MOVNTI

namespace {

using Clock = std::chrono::steady_clock;

// Chunk between deadline checks; ~4 KiB of stores is well under a microsecond.
constexpr std::size_t words_per_chunk = 1024;
// OFF intervals sleep until this close to the deadline, then spin.
constexpr auto spin_margin = std::chrono::microseconds(300);

struct AlignedFree {
    void operator()(int* p) const noexcept { std::free(p); }
};

}  // namespace

TimingReport execute_schedule(const ActivitySchedule& schedule, std::size_t buffer_bytes)
{
    TimingReport report;
    if (schedule.empty()) return report;
    if (buffer_bytes < (std::size_t{1} << 20)) {
        throw Error(ErrorKind::config, "driver buffer must be at least 1 MiB");
    }

    const std::size_t words = buffer_bytes / sizeof(int);
    std::unique_ptr<int, AlignedFree> buffer(
        static_cast<int*>(std::aligned_alloc(64, words * sizeof(int))));
    if (!buffer) throw Error(ErrorKind::capability, "cannot allocate driver buffer");
    // Fault every page in before timing starts.
    std::memset(buffer.get(), 0, words * sizeof(int));

    int* const data = buffer.get();
    std::size_t cursor = 0;
    int value = 0;

    const auto origin = Clock::now();
    auto deadline = origin;
    for (const auto& iv : schedule.intervals) {
        IntervalTiming t;
        t.state = iv.state;
        t.requested_us = iv.duration_us;
        auto begin = Clock::now();
        t.start = begin - origin;
        deadline += std::chrono::microseconds(iv.duration_us);

        if (iv.state == Activity::on) {
            while (Clock::now() < deadline) {
                std::size_t stop = std::min(cursor + words_per_chunk, words);
                for (; cursor < stop; ++cursor) _mm_stream_si32(data + cursor, value);
                if (cursor == words) {
                    cursor = 0;
                    ++value;
                    ++report.store_passes;
                }
            }
            _mm_sfence();
        } else {
            if (deadline - Clock::now() > spin_margin) std::this_thread::sleep_until(deadline - spin_margin);
            while (Clock::now() < deadline) {
                _mm_pause();
            }
        }
        t.end = Clock::now() - origin;
        report.intervals.push_back(t);
    }
    return report;
}

#else

TimingReport execute_schedule(const ActivitySchedule& schedule, std::size_t)
{
    if (schedule.empty()) return {};
    throw Error(ErrorKind::capability, "non-temporal stores are not available on this platform");
}

#endif

}  // namespace ramemit
