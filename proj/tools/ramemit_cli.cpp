// ramemit command-line front end.
//
// Exit codes: 0 success, 1 decode or integrity failure, 2 configuration error.

#include "ramemit/channel.hpp"
#include "ramemit/demod.hpp"
#include "ramemit/harness.hpp"
#include "ramemit/signal_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

using namespace ramemit;
namespace fs = std::filesystem;

namespace {

constexpr int exit_decode = 1;
constexpr int exit_config = 2;

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::sync:
    case ErrorKind::truncation:
    case ErrorKind::integrity:
    case ErrorKind::code_violation:
    case ErrorKind::no_signal:
    case ErrorKind::estimation:
        return exit_decode;
    default:
        return exit_config;
    }
}

struct PayloadArgs {
    std::string hex;
    std::string file;

    void add(CLI::App* app)
    {
        auto* h = app->add_option("--payload-hex", hex, "payload bytes as hex");
        auto* f = app->add_option("--payload-file", file, "payload bytes from a file")->check(CLI::ExistingFile);
        h->excludes(f);
    }

    bool given() const { return !hex.empty() || !file.empty(); }

    BitStream load() const
    {
        if (!hex.empty()) return BitStream::from_hex(hex);
        if (file.empty()) throw Error(ErrorKind::config, "one of --payload-hex or --payload-file is required");
        std::ifstream in(file, std::ios::binary);
        if (!in) throw Error(ErrorKind::io, "cannot open " + file);
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return BitStream::from_bytes(bytes);
    }
};

struct ChannelArgs {
    std::optional<double> snr_db;
    std::optional<double> distance_cm;
    std::uint64_t seed = 1;
    double jammer_duty = 0.0;
    double jammer_amplitude = 1.0;
    double jammer_burst_ms = 1.0;
    double noise_corr_us = SimulationParams{}.noise_corr_us;

    void add(CLI::App* app)
    {
        auto* s = app->add_option("--snr-db", snr_db, "channel SNR in dB");
        auto* d = app->add_option("--distance-cm", distance_cm, "distance mapped to SNR (50..700 cm)");
        s->excludes(d);
        app->add_option("--seed", seed, "noise and jammer seed")->capture_default_str();
        app->add_option("--jammer-duty", jammer_duty, "jammer duty cycle in [0,1]")->capture_default_str();
        app->add_option("--jammer-amplitude", jammer_amplitude, "jammer envelope level")->capture_default_str();
        app->add_option("--jammer-burst-ms", jammer_burst_ms, "mean jammer burst length")->capture_default_str();
        app->add_option("--noise-corr-us", noise_corr_us, "noise correlation time, 0 for white noise")
            ->capture_default_str();
    }

    double resolved_snr() const
    {
        if (snr_db) return *snr_db;
        if (distance_cm) return distance_to_snr(*distance_cm);
        return noise_disabled;
    }

    std::optional<JammerConfig> jammer() const
    {
        if (jammer_duty == 0.0) return std::nullopt;
        JammerConfig j{jammer_duty, jammer_burst_ms, jammer_amplitude};
        j.validate();
        return j;
    }

    ChannelModel model() const
    {
        ChannelModel m;
        m.snr_db = resolved_snr();
        m.seed = seed;
        m.jammer = jammer();
        m.noise_corr_us = noise_corr_us;
        return m;
    }

    void record(EnvelopeMetadata& meta) const
    {
        meta.snr_db = resolved_snr();
        meta.distance_cm = distance_cm;
        meta.seed = seed;
        if (auto j = jammer()) {
            meta.jammer_duty_cycle = j->duty_cycle;
            meta.jammer_burst_ms = j->burst_ms;
            meta.jammer_amplitude = j->amplitude;
        }
    }
};

struct ReceiverArgs {
    double smooth_fraction = SimulationParams{}.smooth_fraction;
    double sync_tolerance = SimulationParams{}.sync_tolerance;

    void add(CLI::App* app)
    {
        app->add_option("--smooth-fraction", smooth_fraction, "moving-average length per half-bit")
            ->capture_default_str();
        app->add_option("--sync-tolerance", sync_tolerance, "allowed preamble mismatch fraction")
            ->capture_default_str();
    }

    SimulationParams apply(SimulationParams p) const
    {
        p.smooth_fraction = smooth_fraction;
        p.sync_tolerance = sync_tolerance;
        return p;
    }
};

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
    out << text;
}

std::string db_text(double v)
{
    if (std::isinf(v)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

/// Hex lines and the per-frame CSV report; returns the exit code.
int report_decode(const DecodeResult& r, const std::optional<BitStream>& reference, const std::string& report_path)
{
    std::ostringstream csv;
    csv << "start_sample,length_bits,crc_valid,est_snr_db,ber_vs_reference\n";
    bool all_ok = !r.frames.empty();
    for (const auto& f : r.frames) {
        const BitStream& p = f.frame.payload;
        std::cout << (p.size() % 8 == 0 ? p.to_hex() : p.to_text()) << '\n';
        std::string ber;
        if (reference) {
            const double errors = static_cast<double>(hamming_distance(p, *reference));
            const double n = static_cast<double>(std::max(p.size(), reference->size()));
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", n > 0 ? errors / n : 0.0);
            ber = buf;
            all_ok = all_ok && p == *reference;
        }
        all_ok = all_ok && f.crc_valid;
        csv << f.start_sample << ',' << p.size() << ',' << (f.crc_valid ? "true" : "false") << ','
            << db_text(f.stats.est_snr_db) << ',' << ber << '\n';
    }
    for (const auto& issue : r.issues) {
        std::cerr << "ramemit: " << to_string(issue.kind) << " at sample " << issue.sample << ": " << issue.message
                  << '\n';
    }
    if (report_path.empty()) {
        std::cout << csv.str();
    } else {
        write_text(report_path, csv.str());
    }
    return all_ok ? 0 : exit_decode;
}

std::vector<double> default_bit_times() { return {10.0, 5.0, 1.0}; }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"RAM-emission covert channel simulator"};
    app.require_subcommand(1);

    std::string scheme_name = "manchester";
    auto add_scheme = [&](CLI::App* sub) {
        sub->add_option("--scheme", scheme_name, "line code: ook or manchester")->capture_default_str();
    };

    // encode
    PayloadArgs enc_payload;
    std::string enc_out;
    auto* encode = app.add_subcommand("encode", "frame a payload and print its line-coded symbols");
    enc_payload.add(encode);
    add_scheme(encode);
    encode->add_option("--out", enc_out, "output text file (default stdout)");

    // synth
    PayloadArgs syn_payload;
    double syn_bit_ms = 10.0, syn_rate = 0.0, syn_lead_ms = 0.0, syn_amp = 1.0;
    std::string syn_out;
    auto* synth = app.add_subcommand("synth", "render a framed payload as an envelope file");
    syn_payload.add(synth);
    add_scheme(synth);
    synth->add_option("--bit-time-ms", syn_bit_ms, "bit duration")->capture_default_str();
    synth->add_option("--sample-rate", syn_rate, "samples per second (default 100 per half-bit)");
    synth->add_option("--lead-ms", syn_lead_ms, "silence before and after the frame (default 2 bits)");
    synth->add_option("--amplitude", syn_amp, "ON level")->capture_default_str();
    synth->add_option("--out", syn_out, "envelope file; a .json sidecar is written next to it")->required();

    // channel
    std::string ch_in, ch_out;
    ChannelArgs ch_args;
    auto* channel = app.add_subcommand("channel", "add noise and jamming to an envelope file");
    channel->add_option("--in", ch_in, "input envelope file")->required()->check(CLI::ExistingFile);
    channel->add_option("--out", ch_out, "output envelope file")->required();
    ch_args.add(channel);

    // decode
    std::string dec_in, dec_report;
    bool dec_iq = false;
    std::optional<double> dec_rate, dec_bit_ms;
    std::optional<std::size_t> dec_payload_bits;
    PayloadArgs dec_ref;
    ReceiverArgs dec_rx;
    auto* decode = app.add_subcommand("decode", "recover frames from an envelope or IQ file");
    decode->add_option("--in", dec_in, "envelope or IQ file")->required()->check(CLI::ExistingFile);
    decode->add_flag("--iq", dec_iq, "input is interleaved float32 I/Q");
    auto* scheme_opt = decode->add_option("--scheme", scheme_name, "line code (default from sidecar)");
    decode->add_option("--sample-rate", dec_rate, "samples per second (default from sidecar)");
    decode->add_option("--bit-time-ms", dec_bit_ms, "bit duration (default from sidecar)");
    decode->add_option("--payload-bits", dec_payload_bits, "slice exactly this many payload bits");
    dec_ref.add(decode);
    decode->add_option("--report", dec_report, "write the frame CSV here instead of stdout");
    dec_rx.add(decode);

    // sweep
    SweepSpec sw;
    sw.bit_times_ms = default_bit_times();
    sw.distances_cm = {50, 100, 200, 300, 400, 500, 600, 700};
    std::optional<double> sw_snr;
    std::string sw_format = "text", sw_out;
    double sw_jam_duty = 0.0, sw_jam_amp = 1.0, sw_jam_burst = 1.0;
    ReceiverArgs sw_rx;
    auto* sweep = app.add_subcommand("sweep", "BER over bit time x distance");
    add_scheme(sweep);
    sweep->add_option("--bit-time-ms", sw.bit_times_ms, "bit durations")->capture_default_str();
    sweep->add_option("--distance-cm", sw.distances_cm, "distances")->capture_default_str();
    sweep->add_option("--snr-db", sw_snr, "fixed SNR for every cell instead of the distance map");
    sweep->add_option("--trials", sw.trials, "trials per cell")->capture_default_str();
    sweep->add_option("--payload-bits", sw.payload_bits, "random payload bits per trial")->capture_default_str();
    sweep->add_option("--seed", sw.seed, "base seed")->capture_default_str();
    sweep->add_option("--threads", sw.threads, "worker threads, 0 for all cores")->capture_default_str();
    sweep->add_option("--noise-corr-us", sw.sim.noise_corr_us, "noise correlation time")->capture_default_str();
    sweep->add_option("--jammer-duty", sw_jam_duty, "jammer duty cycle")->capture_default_str();
    sweep->add_option("--jammer-amplitude", sw_jam_amp, "jammer envelope level")->capture_default_str();
    sweep->add_option("--jammer-burst-ms", sw_jam_burst, "mean jammer burst")->capture_default_str();
    sweep->add_option("--format", sw_format, "csv or text")->capture_default_str();
    sweep->add_option("--out", sw_out, "output file (default stdout)");
    sw_rx.add(sweep);

    // exfil-time
    std::vector<double> ex_bit_times = default_bit_times();
    std::string ex_format = "text", ex_name = "custom";
    std::optional<std::size_t> ex_bits;
    auto* exfil = app.add_subcommand("exfil-time", "time to leak common items");
    exfil->add_option("--bit-time-ms", ex_bit_times, "bit durations")->capture_default_str();
    exfil->add_option("--size-bits", ex_bits, "time a single item of this size instead of the catalogue");
    exfil->add_option("--name", ex_name, "label for --size-bits")->capture_default_str();
    exfil->add_option("--format", ex_format, "csv or text")->capture_default_str();

    // faraday
    ShieldSpec shield{5.8e7, 1e-3, 1.2566e-6, 1.6e9};
    auto* faraday = app.add_subcommand("faraday", "shield attenuation in dB");
    faraday->add_option("--sigma", shield.sigma, "conductivity S/m")->capture_default_str();
    faraday->add_option("--thickness", shield.d, "thickness m")->capture_default_str();
    faraday->add_option("--mu", shield.mu, "permeability H/m")->capture_default_str();
    faraday->add_option("--freq", shield.f, "frequency Hz")->capture_default_str();

    // harmonics
    double hz_clock = 1.6;
    std::size_t hz_count = 3;
    auto* harmonics = app.add_subcommand("harmonics", "clock harmonics in GHz");
    harmonics->add_option("--clock-ghz", hz_clock, "memory clock")->capture_default_str();
    harmonics->add_option("--count", hz_count, "number of harmonics")->capture_default_str();

    // roundtrip
    PayloadArgs rt_payload;
    double rt_bit_ms = 1.0;
    ChannelArgs rt_ch;
    ReceiverArgs rt_rx;
    std::string rt_out;
    auto* roundtrip = app.add_subcommand("roundtrip", "encode, transmit through the channel, decode");
    rt_payload.add(roundtrip);
    add_scheme(roundtrip);
    roundtrip->add_option("--bit-time-ms", rt_bit_ms, "bit duration")->capture_default_str();
    roundtrip->add_option("--out", rt_out, "also save the received envelope");
    rt_ch.add(roundtrip);
    rt_rx.add(roundtrip);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (*encode) {
            const LineCode scheme = parse_line_code(scheme_name);
            const BitStream symbols = line_encode(build_frame(enc_payload.load()).serialize(), scheme);
            write_text(enc_out, symbols.to_text() + "\n");
            return 0;
        }

        if (*synth) {
            const LineCode scheme = parse_line_code(scheme_name);
            const BitStream payload = syn_payload.load();
            const double rate = syn_rate > 0.0 ? syn_rate : SimulationParams{}.rate_for(syn_bit_ms);
            const SymbolTiming timing = SymbolTiming::from_ms(syn_bit_ms, rate);
            timing.validate();
            const auto lead_us = syn_lead_ms > 0.0 ? static_cast<std::int64_t>(std::llround(syn_lead_ms * 1000.0))
                                                   : 2 * timing.bit_time_us;
            ActivitySchedule s;
            s.append_silence(lead_us);
            s.append(schedule_frame(build_frame(payload), timing, scheme));
            s.append_silence(lead_us);
            const EnvelopeSignal sig = synthesize_envelope(s, rate, syn_amp);
            write_envelope(syn_out, sig);
            EnvelopeMetadata meta;
            meta.sample_rate = rate;
            meta.bit_time_ms = syn_bit_ms;
            meta.scheme = scheme;
            meta.payload_bits = payload.size();
            write_metadata(sidecar_path(syn_out), meta);
            std::cerr << "wrote " << sig.size() << " samples at " << rate << " S/s to " << syn_out << '\n';
            return 0;
        }

        if (*channel) {
            EnvelopeMetadata meta = read_metadata(sidecar_path(ch_in));
            const EnvelopeSignal in = read_envelope(ch_in, meta.sample_rate);
            const EnvelopeSignal out = apply_channel(in, ch_args.model());
            write_envelope(ch_out, out);
            ch_args.record(meta);
            write_metadata(sidecar_path(ch_out), meta);
            return 0;
        }

        if (*decode) {
            std::optional<EnvelopeMetadata> meta;
            if (fs::exists(sidecar_path(dec_in))) meta = read_metadata(sidecar_path(dec_in));
            const double rate = dec_rate ? *dec_rate : meta ? meta->sample_rate : 0.0;
            const double bit_ms = dec_bit_ms ? *dec_bit_ms : meta ? meta->bit_time_ms : 0.0;
            if (rate <= 0.0 || bit_ms <= 0.0) {
                throw Error(ErrorKind::config, "no sidecar found; pass --sample-rate and --bit-time-ms");
            }
            const LineCode scheme = scheme_opt->count() > 0 ? parse_line_code(scheme_name)
                                    : meta                  ? meta->scheme
                                                            : parse_line_code(scheme_name);
            const EnvelopeSignal sig = dec_iq ? read_iq_as_envelope(dec_in, rate) : read_envelope(dec_in, rate);
            const SymbolTiming timing = SymbolTiming::from_ms(bit_ms, rate);
            DemodConfig cfg = dec_rx.apply({}).demod_config(timing, scheme);
            cfg.payload_bits_hint = dec_payload_bits;
            std::optional<BitStream> reference;
            if (dec_ref.given()) reference = dec_ref.load();
            return report_decode(demodulate(sig, cfg), reference, dec_report);
        }

        if (*sweep) {
            sw.scheme = parse_line_code(scheme_name);
            sw.snr_override_db = sw_snr;
            sw.sim = sw_rx.apply(sw.sim);
            if (sw_jam_duty > 0.0) sw.sim.jammer = JammerConfig{sw_jam_duty, sw_jam_burst, sw_jam_amp};
            if (sw.sim.jammer) sw.sim.jammer->validate();
            const TableFormat fmt = parse_table_format(sw_format);
            write_text(sw_out, emit_tables(run_sweep(sw), fmt));
            return 0;
        }

        if (*exfil) {
            const TableFormat fmt = parse_table_format(ex_format);
            std::vector<ExfilItem> items = exfil_catalog();
            if (ex_bits) items = {ExfilItem{ex_name, *ex_bits, {}}};
            std::cout << emit_exfil_table(items, ex_bit_times, fmt);
            return 0;
        }

        if (*faraday) {
            const Attenuation a = faraday_attenuation(shield);
            std::printf("attenuation_db %.6f\nshielding_db %.6f\n", a.attenuation_db, a.shielding_db);
            return 0;
        }

        if (*harmonics) {
            for (double h : clock_harmonics(hz_clock, hz_count)) std::printf("%.9g\n", h);
            return 0;
        }

        if (*roundtrip) {
            const LineCode scheme = parse_line_code(scheme_name);
            const BitStream payload = rt_payload.load();
            const SimulationParams sim = rt_rx.apply({});
            const SymbolTiming timing = SymbolTiming::from_ms(rt_bit_ms, sim.rate_for(rt_bit_ms));
            timing.validate();
            ActivitySchedule s;
            s.append_silence(2 * timing.bit_time_us);
            s.append(schedule_frame(build_frame(payload), timing, scheme));
            s.append_silence(2 * timing.bit_time_us);
            const EnvelopeSignal rx = apply_channel(synthesize_envelope(s, timing.sample_rate), rt_ch.model());
            if (!rt_out.empty()) {
                write_envelope(rt_out, rx);
                EnvelopeMetadata meta;
                meta.sample_rate = timing.sample_rate;
                meta.bit_time_ms = rt_bit_ms;
                meta.scheme = scheme;
                meta.payload_bits = payload.size();
                rt_ch.record(meta);
                write_metadata(sidecar_path(rt_out), meta);
            }
            return report_decode(demodulate(rx, sim.demod_config(timing, scheme)), payload, "");
        }
    } catch (const Error& e) {
        std::cerr << "ramemit: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "ramemit: " << e.what() << '\n';
        return exit_config;
    }
    return exit_config;
}
