#include "ramemit/error.hpp"
#include "ramemit/signal_io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace ramemit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / "ramemit_test_signal_io";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("envelope file round trip is float32 exact")
{
    EnvelopeSignal sig{{0.0, 1.0, -0.25, 3.5e-3, 1e6}, 48000.0};
    const auto p = scratch("env.f32");
    write_envelope(p, sig);
    CHECK(fs::file_size(p) == 5 * 4);
    const auto back = read_envelope(p, 48000.0);
    REQUIRE(back.size() == sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i) {
        CHECK(back.samples[i] == static_cast<double>(static_cast<float>(sig.samples[i])));
    }
    CHECK(back.sample_rate == 48000.0);
}

TEST_CASE("envelope files are little-endian")
{
    const auto p = scratch("one.f32");
    write_envelope(p, EnvelopeSignal{{1.0}, 1.0});
    std::ifstream in(p, std::ios::binary);
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    // 1.0f = 0x3f800000
    CHECK(b[0] == 0x00);
    CHECK(b[1] == 0x00);
    CHECK(b[2] == 0x80);
    CHECK(b[3] == 0x3f);
}

TEST_CASE("ragged envelope file is a format error")
{
    const auto p = scratch("bad.f32");
    std::ofstream(p, std::ios::binary) << "abcde";
    CHECK_THROWS_AS(read_envelope(p, 1.0), Error);
    CHECK_THROWS_AS(read_envelope(scratch("missing.f32"), 1.0), Error);
}

TEST_CASE("metadata sidecar round trip")
{
    EnvelopeMetadata m;
    m.sample_rate = 200000;
    m.bit_time_ms = 1;
    m.scheme = LineCode::manchester;
    m.payload_bits = 32;
    SUBCASE("timing fields only")
    {
        CHECK(metadata_from_json(metadata_to_json(m)) == m);
    }
    SUBCASE("channel fields")
    {
        m.snr_db = 22;
        m.distance_cm = 300;
        m.seed = 0xffffffffffffffffull;
        m.jammer_duty_cycle = 0.5;
        m.jammer_burst_ms = 1;
        m.jammer_amplitude = 1;
        const auto p = scratch("env.f32");
        write_metadata(sidecar_path(p), m);
        CHECK(sidecar_path(p).string() == p.string() + ".json");
        CHECK(read_metadata(sidecar_path(p)) == m);
    }
    SUBCASE("noise disabled is stored as null")
    {
        m.snr_db = std::numeric_limits<double>::infinity();
        const auto text = metadata_to_json(m);
        CHECK(text.find("null") != std::string::npos);
        CHECK(std::isinf(*metadata_from_json(text).snr_db));
    }
}

TEST_CASE("malformed metadata is a format error")
{
    CHECK_THROWS_AS(metadata_from_json("{"), Error);
    CHECK_THROWS_AS(metadata_from_json(R"({"sample_rate": 1})"), Error);
    CHECK_THROWS_AS(
        metadata_from_json(R"({"sample_rate":1,"bit_time_ms":1,"scheme":"fsk","payload_bits":8})"), Error);
}

TEST_CASE("IQ import takes the magnitude")
{
    const std::vector<float> iq{3.f, 4.f, 0.f, -2.f, 1.f, 0.f};
    const auto p = scratch("cap.iq");
    write_iq(p, iq);
    const auto env = read_iq_as_envelope(p, 1e6);
    REQUIRE(env.size() == 3);
    CHECK(env.samples[0] == doctest::Approx(5.0));
    CHECK(env.samples[1] == doctest::Approx(2.0));
    CHECK(env.samples[2] == doctest::Approx(1.0));
    std::ofstream(p, std::ios::binary | std::ios::trunc).write("12345678abcd", 12);
    CHECK_THROWS_AS(read_iq_as_envelope(p, 1e6), Error);
}
