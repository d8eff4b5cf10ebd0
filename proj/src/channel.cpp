#include "ramemit/channel.hpp"

#include "ramemit/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace ramemit {

void JammerConfig::validate() const
{
    if (!(duty_cycle >= 0.0 && duty_cycle <= 1.0)) throw Error(ErrorKind::config, "jammer duty cycle must be in [0,1]");
    if (!(burst_ms > 0.0) || !std::isfinite(burst_ms)) throw Error(ErrorKind::config, "jammer burst must be positive");
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw Error(ErrorKind::config, "jammer amplitude must be non-negative");
    }
}

void ChannelModel::validate() const
{
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
        throw Error(ErrorKind::config, "snr_db must be finite or the noise-disabled sentinel");
    }
    if (!(noise_corr_us >= 0.0) || !std::isfinite(noise_corr_us)) {
        throw Error(ErrorKind::config, "noise correlation time must be non-negative");
    }
    if (jammer) jammer->validate();
}

double on_level_power(const EnvelopeSignal& signal)
{
    double peak = 0.0;
    for (double s : signal.samples) peak = std::max(peak, std::abs(s));
    if (peak == 0.0) throw Error(ErrorKind::calibration, "signal has no ON-level samples to calibrate against");
    double sum = 0.0;
    std::size_t n = 0;
    for (double s : signal.samples) {
        if (std::abs(s) >= 0.5 * peak) {
            sum += s * s;
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

namespace {

void add_noise(std::vector<double>& out, double sigma, double sample_rate, double corr_us, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    if (corr_us <= 0.0) {
        for (double& s : out) s += sigma * gauss(rng);
        return;
    }
    const double a = std::exp(-1e6 / (corr_us * sample_rate));
    const double drive = std::sqrt(1.0 - a * a);
    double state = gauss(rng);
    for (double& s : out) {
        s += sigma * state;
        state = a * state + drive * gauss(rng);
    }
}

double noise_sigma(const EnvelopeSignal& clean, double snr_db)
{
    return std::sqrt(on_level_power(clean) / std::pow(10.0, snr_db / 10.0));
}

}  // namespace

EnvelopeSignal apply_awgn(const EnvelopeSignal& signal, const ChannelModel& model)
{
    model.validate();
    if (signal.empty()) throw Error(ErrorKind::config, "cannot add noise to an empty signal");
    EnvelopeSignal out = signal;
    if (model.snr_db == noise_disabled) return out;
    add_noise(out.samples, noise_sigma(signal, model.snr_db), signal.sample_rate, model.noise_corr_us, model.seed);
    return out;
}

EnvelopeSignal apply_jammer(const EnvelopeSignal& signal, const JammerConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    EnvelopeSignal out = signal;
    if (cfg.duty_cycle == 0.0 || cfg.amplitude == 0.0) return out;
    if (cfg.duty_cycle == 1.0) {
        for (double& s : out.samples) s += cfg.amplitude;
        return out;
    }
    if (!(signal.sample_rate > 0.0)) throw Error(ErrorKind::config, "jammer needs a positive sample rate");

    std::mt19937_64 rng(seed);
    const double on_mean_s = cfg.burst_ms / 1000.0;
    const double off_mean_s = on_mean_s * (1.0 - cfg.duty_cycle) / cfg.duty_cycle;
    std::exponential_distribution<double> on_len(1.0 / on_mean_s);
    std::exponential_distribution<double> off_len(1.0 / off_mean_s);

    bool active = std::bernoulli_distribution(cfg.duty_cycle)(rng);
    double switch_at = active ? on_len(rng) : off_len(rng);
    const double dt = 1.0 / signal.sample_rate;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const double t = static_cast<double>(i) * dt;
        while (t >= switch_at) {
            active = !active;
            switch_at += active ? on_len(rng) : off_len(rng);
        }
        if (active) out.samples[i] += cfg.amplitude;
    }
    return out;
}

EnvelopeSignal apply_channel(const EnvelopeSignal& signal, const ChannelModel& model)
{
    model.validate();
    if (signal.empty()) throw Error(ErrorKind::config, "cannot apply a channel to an empty signal");
    EnvelopeSignal out = signal;
    if (model.jammer) {
        // Independent stream from the noise generator.
        out = apply_jammer(out, *model.jammer, model.seed ^ 0x6a09e667f3bcc909ull);
    }
    if (model.snr_db != noise_disabled) {
        add_noise(out.samples, noise_sigma(signal, model.snr_db), signal.sample_rate, model.noise_corr_us,
                  model.seed);
    }
    return out;
}

double distance_to_snr(double distance_cm)
{
    const double lo = snr_anchors.front().first;
    const double hi = snr_anchors.back().first;
    if (!(distance_cm >= lo && distance_cm <= hi)) {
        throw Error(ErrorKind::domain, "distance " + std::to_string(distance_cm) + " cm is outside [50, 700] cm");
    }
    for (std::size_t i = 1; i < snr_anchors.size(); ++i) {
        const auto [d1, s1] = snr_anchors[i];
        if (distance_cm <= d1) {
            const auto [d0, s0] = snr_anchors[i - 1];
            return s0 + (s1 - s0) * (distance_cm - d0) / (d1 - d0);
        }
    }
    return snr_anchors.back().second;
}

void ShieldSpec::validate() const
{
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(sigma) || !positive(d) || !positive(mu) || !positive(f)) {
        throw Error(ErrorKind::domain, "shield parameters must all be strictly positive");
    }
}

Attenuation faraday_attenuation(const ShieldSpec& spec)
{
    spec.validate();
    const double ratio = (spec.sigma * spec.d) / (spec.mu * spec.f);
    // 10 log10(1 + r^2) without cancellation for small r or overflow for large r.
    double loss;
    if (ratio < 1e150) {
        loss = 10.0 * std::log1p(ratio * ratio) / std::numbers::ln10;
    } else {
        loss = 20.0 * std::log10(ratio);
    }
    return {-loss, loss};
}

std::vector<double> clock_harmonics(double clock_ghz, std::size_t n)
{
    if (!(clock_ghz >= 1e-9) || !std::isfinite(clock_ghz)) throw Error(ErrorKind::domain, "clock must be at least 1 Hz");
    if (n == 0) throw Error(ErrorKind::domain, "harmonic count must be at least 1");
    std::vector<double> out;
    out.reserve(n);
    // Whole-hertz resolution, so 3 x 1.6 GHz is 4.8 rather than 4.800000000000001.
    for (std::size_t k = 1; k <= n; ++k) out.push_back(std::round(static_cast<double>(k) * clock_ghz * 1e9) / 1e9);
    return out;
}

}  // namespace ramemit
