#include "oracles.hpp"

#include "ramemit/error.hpp"
#include "ramemit/frames.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace ramemit;

namespace {

BitStream random_bits(std::mt19937_64& rng, std::size_t n)
{
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1u);
    return BitStream(std::move(v));
}

std::string read_fixture(const std::string& name)
{
    std::ifstream in(std::string(RAMEMIT_FIXTURES) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::io;
}

}  // namespace

TEST_CASE("bit stream text and hex parsing")
{
    CHECK(BitStream::from_text("10 1\n0") == BitStream{1, 0, 1, 0});
    CHECK(BitStream::from_hex("0x44 41").to_text() == "0100010001000001");
    CHECK(BitStream::from_hex("44415441").to_hex() == "44415441");
    CHECK(kind_of([] { BitStream::from_text("102"); }) == ErrorKind::format);
    CHECK(kind_of([] { BitStream::from_hex("4"); }) == ErrorKind::format);
    CHECK(kind_of([] { BitStream{0, 2}; }) == ErrorKind::format);
    CHECK(kind_of([] { BitStream b; b.push_back(7); }) == ErrorKind::format);
}

TEST_CASE("empty payload frame starts with preamble then sixteen zero bits")
{
    const auto bits = build_frame({}).serialize();
    REQUIRE(bits.size() == 40);
    CHECK(bits.slice(0, 8) == BitStream{1, 0, 1, 0, 1, 0, 1, 0});
    CHECK(bits.slice(8, 16).to_text() == std::string(16, '0'));
}

TEST_CASE("DATA payload frame matches the stored fixture")
{
    const auto payload = BitStream::from_hex("44415441");
    const Frame f = build_frame(payload);
    CHECK(f.length_field == 32);
    CHECK(f.payload.to_hex() == "44415441");
    CHECK(f.serialize().to_text() == BitStream::from_text(read_fixture("frame_DATA.txt")).to_text());
}

TEST_CASE("frame crc agrees with a long-division oracle")
{
    std::mt19937_64 rng(11);
    for (std::size_t len : {0u, 1u, 7u, 8u, 32u, 33u, 255u, 1000u}) {
        const Frame f = build_frame(random_bits(rng, len));
        const BitStream s = f.serialize();
        std::vector<int> covered;
        for (std::size_t i = 8; i < s.size() - 16; ++i) covered.push_back(s[i]);
        CHECK(oracle::crc16_long_division(covered) == f.crc);
        CHECK(s.read_uint(s.size() - 16, 16) == f.crc);
    }
}

TEST_CASE("crc16 matches the published check value")
{
    // CRC-16/CCITT-FALSE("123456789") == 0x29B1
    const std::string msg = "123456789";
    std::vector<std::uint8_t> bytes(msg.begin(), msg.end());
    CHECK(crc16_ccitt(BitStream::from_bytes(bytes).bits()) == 0x29B1);
}

TEST_CASE("oversized payload is a size error")
{
    BitStream big(std::vector<std::uint8_t>(65536, 0));
    CHECK(kind_of([&] { build_frame(big); }) == ErrorKind::size);
    CHECK_NOTHROW(build_frame(BitStream(std::vector<std::uint8_t>(65535, 1))));
}

TEST_CASE("parse_frame inverts build_frame for random payloads")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const BitStream p = random_bits(rng, rng() % 600);
        const Frame f = build_frame(p);
        const auto parsed = parse_frame(f.serialize());
        CHECK(parsed.crc_valid);
        CHECK(parsed.frame == f);
        CHECK(parsed.frame.payload == p);
    }
}

TEST_CASE("parse_frame error paths")
{
    const Frame f = build_frame(BitStream::from_hex("44415441"));
    const BitStream good = f.serialize();

    SUBCASE("payload bit flip is flagged invalid but still returned")
    {
        std::vector<std::uint8_t> v(good.bits().begin(), good.bits().end());
        v[8 + 16 + 5] ^= 1;
        const auto parsed = parse_frame(BitStream(v));
        CHECK_FALSE(parsed.crc_valid);
        CHECK(hamming_distance(parsed.frame.payload, f.payload) == 1);
        CHECK(kind_of([&] { parsed.require_valid(); }) == ErrorKind::integrity);
    }
    SUBCASE("truncated mid-payload")
    {
        CHECK(kind_of([&] { parse_frame(good.slice(0, 8 + 16 + 10)); }) == ErrorKind::truncation);
    }
    SUBCASE("bad preamble")
    {
        std::vector<std::uint8_t> v(good.bits().begin(), good.bits().end());
        v[3] ^= 1;
        CHECK(kind_of([&] { parse_frame(BitStream(v)); }) == ErrorKind::sync);
    }
    SUBCASE("trailing bits are ignored")
    {
        BitStream longer = good;
        longer.append(BitStream{1, 1, 0});
        CHECK(parse_frame(longer).frame == f);
    }
}

TEST_CASE("every single-bit error in length or payload is detected")
{
    const Frame f = build_frame(BitStream::from_hex("deadbeef01"));
    const BitStream good = f.serialize();
    for (std::size_t i = 8; i < good.size(); ++i) {
        std::vector<std::uint8_t> v(good.bits().begin(), good.bits().end());
        v[i] ^= 1;
        bool detected = true;
        try {
            detected = !parse_frame(BitStream(v)).crc_valid;
        } catch (const Error& e) {
            detected = e.kind() == ErrorKind::truncation;
        }
        CHECK_MESSAGE(detected, "bit " << i);
    }
}

TEST_CASE("manchester fixed examples")
{
    CHECK(manchester_encode({}).empty());
    CHECK(manchester_encode({1, 0}) == BitStream{0, 1, 1, 0});
    CHECK(manchester_encode(preamble()) == BitStream{0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0});
    CHECK(manchester_decode({0, 1, 1, 0}) == BitStream{1, 0});
    try {
        manchester_decode({1, 1, 0, 1});
        FAIL("expected code violation");
    } catch (const CodeViolation& v) {
        CHECK(v.bit_index() == 0);
    }
    CHECK(kind_of([] { manchester_decode({0, 1, 1}); }) == ErrorKind::format);
}

TEST_CASE("manchester properties over random inputs")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const BitStream b = random_bits(rng, rng() % 300);
        const BitStream enc = manchester_encode(b);
        REQUIRE(enc.size() == 2 * b.size());
        CHECK(manchester_decode(enc) == b);
        for (std::size_t i = 0; i < enc.size(); i += 2) CHECK(enc[i] != enc[i + 1]);

        if (enc.empty()) continue;
        // One flipped half-bit: either a violation at that bit or a clean decode
        // differing only at that bit.
        const std::size_t at = rng() % enc.size();
        std::vector<std::uint8_t> v(enc.bits().begin(), enc.bits().end());
        v[at] ^= 1;
        try {
            const BitStream dec = manchester_decode(BitStream(v));
            CHECK(hamming_distance(dec, b) == 1);
            CHECK(dec[at / 2] != b[at / 2]);
        } catch (const CodeViolation& cv) {
            CHECK(cv.bit_index() == at / 2);
        }
    }
}

TEST_CASE("ook map is the identity")
{
    CHECK(ook_map({1, 0, 1}) == BitStream{1, 0, 1});
    CHECK(ook_map({}).empty());
    std::mt19937_64 rng(3);
    const BitStream b = random_bits(rng, 77);
    CHECK(ook_map(b) == b);
    CHECK(line_encode(b, LineCode::ook_direct) == b);
    CHECK(line_decode(line_encode(b, LineCode::manchester), LineCode::manchester) == b);
}

TEST_CASE("line code names")
{
    CHECK(parse_line_code("ook") == LineCode::ook_direct);
    CHECK(parse_line_code("manchester") == LineCode::manchester);
    CHECK(kind_of([] { parse_line_code("fsk"); }) == ErrorKind::config);
}
