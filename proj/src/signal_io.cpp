#include "ramemit/signal_io.hpp"

#include "ramemit/error.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace ramemit {

namespace {

using nlohmann::json;

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

void put_f32le(std::string& out, float v)
{
    auto word = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((word >> (8 * i)) & 0xffu));
}

float get_f32le(const unsigned char* p)
{
    std::uint32_t word = 0;
    for (int i = 0; i < 4; ++i) word |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return std::bit_cast<float>(word);
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(const std::filesystem::path& path, const std::string& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::io, "short write to " + path.string());
}

std::vector<float> read_f32_file(const std::filesystem::path& path, std::size_t group)
{
    std::string raw = slurp(path);
    if (raw.size() % (4 * group) != 0) {
        throw Error(ErrorKind::format, path.string() + ": size is not a multiple of " + std::to_string(4 * group));
    }
    std::vector<float> values(raw.size() / 4);
    const auto* bytes = reinterpret_cast<const unsigned char*>(raw.data());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = get_f32le(bytes + 4 * i);
    return values;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& envelope_path)
{
    auto p = envelope_path;
    p += ".json";
    return p;
}

void write_envelope(const std::filesystem::path& path, const EnvelopeSignal& signal)
{
    signal.check_finite();
    std::string bytes;
    bytes.reserve(signal.size() * 4);
    for (double s : signal.samples) put_f32le(bytes, static_cast<float>(s));
    spill(path, bytes);
}

EnvelopeSignal read_envelope(const std::filesystem::path& path, double sample_rate)
{
    EnvelopeSignal sig;
    sig.sample_rate = sample_rate;
    auto values = read_f32_file(path, 1);
    sig.samples.assign(values.begin(), values.end());
    sig.check_finite();
    return sig;
}

EnvelopeSignal read_iq_as_envelope(const std::filesystem::path& path, double sample_rate)
{
    auto values = read_f32_file(path, 2);
    EnvelopeSignal sig;
    sig.sample_rate = sample_rate;
    sig.samples.reserve(values.size() / 2);
    for (std::size_t i = 0; i < values.size(); i += 2) {
        sig.samples.push_back(std::hypot(static_cast<double>(values[i]), static_cast<double>(values[i + 1])));
    }
    sig.check_finite();
    return sig;
}

void write_iq(const std::filesystem::path& path, std::span<const float> interleaved)
{
    if (interleaved.size() % 2 != 0) throw Error(ErrorKind::format, "IQ data must contain whole pairs");
    std::string bytes;
    bytes.reserve(interleaved.size() * 4);
    for (float v : interleaved) put_f32le(bytes, v);
    spill(path, bytes);
}

std::string metadata_to_json(const EnvelopeMetadata& meta)
{
    json j;
    j["sample_rate"] = meta.sample_rate;
    j["bit_time_ms"] = meta.bit_time_ms;
    j["scheme"] = std::string(to_string(meta.scheme));
    j["payload_bits"] = meta.payload_bits;
    if (meta.snr_db) {
        // JSON has no infinity; a noise-free channel is written as null.
        j["snr_db"] = std::isfinite(*meta.snr_db) ? json(*meta.snr_db) : json(nullptr);
    }
    if (meta.distance_cm) j["distance_cm"] = *meta.distance_cm;
    if (meta.seed) j["seed"] = *meta.seed;
    if (meta.jammer_duty_cycle || meta.jammer_burst_ms || meta.jammer_amplitude) {
        json jam = json::object();
        if (meta.jammer_duty_cycle) jam["duty_cycle"] = *meta.jammer_duty_cycle;
        if (meta.jammer_burst_ms) jam["burst_ms"] = *meta.jammer_burst_ms;
        if (meta.jammer_amplitude) jam["amplitude"] = *meta.jammer_amplitude;
        j["jammer"] = jam;
    }
    return j.dump(2) + "\n";
}

EnvelopeMetadata metadata_from_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::format, std::string("sidecar is not valid JSON: ") + e.what());
    }
    try {
        EnvelopeMetadata meta;
        meta.sample_rate = j.at("sample_rate").get<double>();
        meta.bit_time_ms = j.at("bit_time_ms").get<double>();
        meta.scheme = parse_line_code(j.at("scheme").get<std::string>());
        meta.payload_bits = j.at("payload_bits").get<std::size_t>();
        if (j.contains("snr_db")) {
            const auto& v = j["snr_db"];
            meta.snr_db = v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
        }
        if (j.contains("distance_cm")) meta.distance_cm = j["distance_cm"].get<double>();
        if (j.contains("seed")) meta.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("jammer")) {
            const auto& jam = j["jammer"];
            if (jam.contains("duty_cycle")) meta.jammer_duty_cycle = jam["duty_cycle"].get<double>();
            if (jam.contains("burst_ms")) meta.jammer_burst_ms = jam["burst_ms"].get<double>();
            if (jam.contains("amplitude")) meta.jammer_amplitude = jam["amplitude"].get<double>();
        }
        return meta;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::format, std::string("sidecar field error: ") + e.what());
    }
}

void write_metadata(const std::filesystem::path& path, const EnvelopeMetadata& meta)
{
    spill(path, metadata_to_json(meta));
}

EnvelopeMetadata read_metadata(const std::filesystem::path& path)
{
    return metadata_from_json(slurp(path));
}

}  // namespace ramemit
