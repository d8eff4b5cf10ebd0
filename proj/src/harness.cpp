#include "ramemit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace ramemit {

double SimulationParams::rate_for(double finest_bit_time_ms) const
{
    if (sample_rate > 0.0) return sample_rate;
    // samples_per_halfbit = rate * (bit_time / 2)
    return samples_per_halfbit * 2.0 / (finest_bit_time_ms / 1000.0);
}

DemodConfig SimulationParams::demod_config(const SymbolTiming& timing, LineCode scheme) const
{
    DemodConfig cfg;
    cfg.timing = timing;
    cfg.scheme = scheme;
    cfg.smooth_window = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(smooth_fraction * timing.samples_per_halfbit())));
    cfg.sync_tolerance = sync_tolerance;
    return cfg;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept
{
    // splitmix64 finalizer over a combined state
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double estimate_snr(const EnvelopeSignal& signal, std::span<const std::uint8_t> on_mask)
{
    if (on_mask.size() != signal.size()) throw Error(ErrorKind::estimation, "mask length differs from signal length");
    double on_sum = 0.0, off_sum = 0.0, off_sq = 0.0;
    std::size_t on_n = 0, off_n = 0;
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const double x = signal.samples[i];
        if (on_mask[i]) {
            on_sum += x;
            ++on_n;
        } else {
            off_sum += x;
            off_sq += x * x;
            ++off_n;
        }
    }
    if (on_n < 100 || off_n < 100) {
        throw Error(ErrorKind::estimation, "need at least 100 ON and 100 OFF samples");
    }
    const double mean_on = on_sum / static_cast<double>(on_n);
    const double mean_off = off_sum / static_cast<double>(off_n);
    const double var_off = off_sq / static_cast<double>(off_n) - mean_off * mean_off;
    if (var_off <= 1e-300) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(mean_on * mean_on / var_off);
}

TrialOutcome run_trial(const BitStream& payload, const SymbolTiming& timing, LineCode scheme, double snr_db,
                       std::uint64_t seed, const SimulationParams& params)
{
    const std::int64_t bit_us = timing.bit_time_us;
    ActivitySchedule schedule;
    schedule.append_silence(static_cast<std::int64_t>(params.lead_silence_bits) * bit_us);
    schedule.append(schedule_frame(build_frame(payload), timing, scheme));
    schedule.append_silence(static_cast<std::int64_t>(params.trail_silence_bits) * bit_us);

    const EnvelopeSignal clean = synthesize_envelope(schedule, timing.sample_rate, params.amplitude);
    ChannelModel model;
    model.snr_db = snr_db;
    model.seed = seed;
    model.jammer = params.jammer;
    model.noise_corr_us = params.noise_corr_us;
    const EnvelopeSignal received = apply_channel(clean, model);

    TrialOutcome out;
    out.bits = payload.size();
    const auto mask = activity_mask(schedule, timing.sample_rate);
    out.est_snr_db = estimate_snr(received, mask);

    DemodConfig cfg = params.demod_config(timing, scheme);
    cfg.payload_bits_hint = payload.size();
    const DecodeResult decoded = demodulate(received, cfg);
    if (decoded.frames.empty()) return out;
    const auto& first = decoded.frames.front();
    out.synced = true;
    out.crc_valid = first.crc_valid;
    out.bit_errors = hamming_distance(first.frame.payload, payload);
    return out;
}

void SweepSpec::validate() const
{
    if (bit_times_ms.empty() || distances_cm.empty()) throw Error(ErrorKind::config, "sweep grid lists must be non-empty");
    if (trials < 1) throw Error(ErrorKind::config, "trials must be at least 1");
    if (payload_bits < 8 || payload_bits > max_payload_bits) {
        throw Error(ErrorKind::config, "payload_bits must be in [8, 65535]");
    }
}

const BerCell* BerReport::find(double bit_time_ms, double distance_cm) const
{
    for (const auto& c : cells) {
        if (c.bit_time_ms == bit_time_ms && c.distance_cm == distance_cm) return &c;
    }
    return nullptr;
}

namespace {

BitStream random_payload(std::size_t bits, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> v(bits);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1u);
    return BitStream(std::move(v));
}

struct CellSetup {
    std::optional<SymbolTiming> timing;
    double snr_db = 0.0;
    std::string error;
};

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn)
{
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
}

}  // namespace

BerReport run_sweep(const SweepSpec& spec)
{
    spec.validate();
    const double finest = *std::min_element(spec.bit_times_ms.begin(), spec.bit_times_ms.end());
    const double rate = spec.sim.rate_for(finest);

    BerReport report;
    report.payload_bits = spec.payload_bits;
    report.trials = spec.trials;

    std::vector<CellSetup> setups;
    for (double bt : spec.bit_times_ms) {
        for (double d : spec.distances_cm) {
            BerCell cell;
            cell.bit_time_ms = bt;
            cell.distance_cm = d;
            cell.bits_sent = spec.trials * spec.payload_bits;
            CellSetup setup;
            try {
                setup.snr_db = spec.snr_override_db ? *spec.snr_override_db : distance_to_snr(d);
                auto timing = SymbolTiming::from_ms(bt, rate);
                (void)spec.sim.demod_config(timing, spec.scheme).validate();
                setup.timing = timing;
            } catch (const Error& e) {
                setup.error = e.what();
            }
            cell.snr_db = setup.snr_db;
            cell.error = setup.error;
            report.cells.push_back(cell);
            setups.push_back(setup);
        }
    }

    const std::size_t jobs = setups.size() * spec.trials;
    std::vector<TrialOutcome> outcomes(jobs);
    std::vector<std::string> failures(jobs);
    parallel_for(jobs, spec.threads, [&](std::size_t job) {
        const std::size_t c = job / spec.trials;
        const std::size_t t = job % spec.trials;
        if (!setups[c].timing) return;
        const std::uint64_t trial_seed = mix_seed(mix_seed(spec.seed, c), t);
        try {
            const BitStream payload = random_payload(spec.payload_bits, mix_seed(trial_seed, 0x7061796c));
            outcomes[job] = run_trial(payload, *setups[c].timing, spec.scheme, setups[c].snr_db, trial_seed, spec.sim);
        } catch (const Error& e) {
            failures[job] = e.what();
        }
    });

    for (std::size_t c = 0; c < report.cells.size(); ++c) {
        BerCell& cell = report.cells[c];
        if (!cell.error.empty()) continue;
        double snr_lin_sum = 0.0;
        for (std::size_t t = 0; t < spec.trials; ++t) {
            const std::size_t job = c * spec.trials + t;
            if (!failures[job].empty()) {
                cell.error = failures[job];
                break;
            }
            const auto& o = outcomes[job];
            snr_lin_sum += std::pow(10.0, o.est_snr_db / 10.0);
            if (!o.synced) {
                ++cell.frames_lost;
                continue;
            }
            cell.bit_errors += o.bit_errors;
        }
        if (!cell.error.empty()) continue;
        cell.est_snr_db = 10.0 * std::log10(snr_lin_sum / static_cast<double>(spec.trials));
        const std::size_t compared = cell.bits_compared(spec.payload_bits);
        cell.ber = compared ? static_cast<double>(cell.bit_errors) / static_cast<double>(compared) : 0.0;
    }
    return report;
}

HighRateResult highrate_probe(std::size_t bit_rate_bps, double snr_db, std::size_t bits, std::uint64_t seed,
                              LineCode scheme, const SimulationParams& params)
{
    if (bit_rate_bps < 1000) throw Error(ErrorKind::config, "high-rate probe needs at least 1000 bps");
    if (1000000 % bit_rate_bps != 0) {
        throw Error(ErrorKind::config, "bit rate must give a whole-microsecond bit time");
    }
    if (bits < 1 || bits > max_payload_bits) throw Error(ErrorKind::config, "bits must be in [1, 65535]");
    const double rate = params.sample_rate > 0.0 ? params.sample_rate : default_sample_rate;
    SymbolTiming timing{static_cast<std::int64_t>(1000000 / bit_rate_bps), rate};
    timing.validate();
    (void)params.demod_config(timing, scheme).validate();

    const BitStream payload = random_payload(bits, mix_seed(seed, 0x7061796c));
    const TrialOutcome o = run_trial(payload, timing, scheme, snr_db, seed, params);
    HighRateResult r;
    r.synced = o.synced;
    r.bits = bits;
    r.bit_errors = o.synced ? o.bit_errors : bits;
    r.ber = static_cast<double>(r.bit_errors) / static_cast<double>(bits);
    return r;
}

ExfilTime exfil_time(const ExfilItem& item, double bit_time_ms)
{
    if (item.size_bits == 0) throw Error(ErrorKind::config, "item size must be positive");
    if (!(bit_time_ms > 0.0)) throw Error(ErrorKind::config, "bit time must be positive");
    ExfilTime t;
    t.payload_s = static_cast<double>(item.size_bits) * bit_time_ms / 1000.0;
    t.overhead_s = static_cast<double>(frame_overhead_bits) * bit_time_ms / 1000.0;
    return t;
}

const std::vector<ExfilItem>& exfil_catalog()
{
    static const std::vector<ExfilItem> items{
        {"Keylogging (per key)", 16, {}},
        {"4096-bit RSA key", 4096, {{10.0, 41.96}, {5.0, 20.48}, {1.0, 4.096}}},
        {"Biometric information", 10000, {{10.0, 100.0}, {5.0, 50.0}, {1.0, 10.0}}},
        {"Password", 128, {{10.0, 1.28}, {5.0, 0.64}, {1.0, 0.128}}},
        {"Small image (.jpg)", 25000, {{10.0, 250.0}, {5.0, 125.0}, {1.0, 25.0}}},
        {"Text document (.txt, .docx)", 40000, {{10.0, 400.0}, {5.0, 200.0}, {1.0, 40.0}}},
    };
    return items;
}

}  // namespace ramemit
