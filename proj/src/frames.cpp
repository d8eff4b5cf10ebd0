#include "ramemit/frames.hpp"

#include "ramemit/error.hpp"

#include <string>

namespace ramemit {

std::string_view to_string(LineCode scheme) noexcept
{
    return scheme == LineCode::manchester ? "manchester" : "ook";
}

LineCode parse_line_code(std::string_view name)
{
    if (name == "ook" || name == "ook_direct" || name == "OOK") return LineCode::ook_direct;
    if (name == "manchester" || name == "MANCHESTER") return LineCode::manchester;
    throw Error(ErrorKind::config, "unknown line code '" + std::string(name) + "'");
}

const BitStream& preamble()
{
    static const BitStream pattern{1, 0, 1, 0, 1, 0, 1, 0};
    return pattern;
}

std::uint16_t crc16_ccitt(std::span<const std::uint8_t> bits)
{
    std::uint16_t reg = 0xFFFF;
    for (auto bit : bits) {
        bool feedback = ((reg >> 15) & 1u) != bit;
        reg = static_cast<std::uint16_t>(reg << 1);
        if (feedback) reg ^= 0x1021;
    }
    return reg;
}

namespace {

BitStream crc_input(std::uint16_t length_field, const BitStream& payload)
{
    BitStream covered;
    covered.append_uint(length_field, length_field_bits);
    covered.append(payload);
    return covered;
}

}  // namespace

BitStream Frame::serialize() const
{
    BitStream out = preamble;
    out.append_uint(length_field, length_field_bits);
    out.append(payload);
    out.append_uint(crc, crc_bits);
    return out;
}

Frame build_frame(const BitStream& payload)
{
    if (payload.size() > max_payload_bits) {
        throw Error(ErrorKind::size, "payload of " + std::to_string(payload.size()) +
                                         " bits exceeds the 65535-bit frame limit");
    }
    Frame f;
    f.preamble = preamble();
    f.length_field = static_cast<std::uint16_t>(payload.size());
    f.payload = payload;
    f.crc = crc16_ccitt(crc_input(f.length_field, payload).bits());
    return f;
}

const Frame& ParsedFrame::require_valid() const
{
    if (!crc_valid) {
        throw Error(ErrorKind::integrity, "frame checksum mismatch");
    }
    return frame;
}

ParsedFrame parse_frame(const BitStream& bits)
{
    return parse_frame(bits, FrameParseOptions{});
}

ParsedFrame parse_frame(const BitStream& bits, const FrameParseOptions& options)
{
    if (bits.size() < preamble_bits) {
        throw Error(ErrorKind::truncation, "stream shorter than the preamble");
    }
    ParsedFrame out;
    out.frame.preamble = bits.slice(0, preamble_bits);
    if (options.check_preamble && out.frame.preamble != preamble()) {
        throw Error(ErrorKind::sync, "preamble mismatch: " + out.frame.preamble.to_text());
    }
    if (bits.size() < preamble_bits + length_field_bits) {
        throw Error(ErrorKind::truncation, "stream ends inside the length field");
    }
    out.frame.length_field = static_cast<std::uint16_t>(bits.read_uint(preamble_bits, length_field_bits));
    const std::size_t payload_at = preamble_bits + length_field_bits;
    const std::size_t payload_len = options.payload_bits.value_or(out.frame.length_field);
    if (bits.size() < payload_at + payload_len + crc_bits) {
        throw Error(ErrorKind::truncation, "frame needs " + std::to_string(payload_len) +
                                               " payload bits but only " +
                                               std::to_string(bits.size() - payload_at) + " bits remain");
    }
    out.frame.payload = bits.slice(payload_at, payload_len);
    out.frame.crc = static_cast<std::uint16_t>(bits.read_uint(payload_at + payload_len, crc_bits));
    out.crc_valid = out.frame.length_field == payload_len &&
                    crc16_ccitt(crc_input(out.frame.length_field, out.frame.payload).bits()) == out.frame.crc;
    return out;
}

BitStream manchester_encode(const BitStream& bits)
{
    std::vector<std::uint8_t> half;
    half.reserve(bits.size() * 2);
    for (auto b : bits.bits()) {
        half.push_back(static_cast<std::uint8_t>(b ^ 1u));
        half.push_back(b);
    }
    return BitStream(std::move(half));
}

BitStream manchester_decode(const BitStream& halfbits)
{
    if (halfbits.size() % 2 != 0) {
        throw Error(ErrorKind::format, "manchester stream has odd length " + std::to_string(halfbits.size()));
    }
    std::vector<std::uint8_t> out;
    out.reserve(halfbits.size() / 2);
    for (std::size_t i = 0; i < halfbits.size(); i += 2) {
        if (halfbits[i] == halfbits[i + 1]) throw CodeViolation(i / 2);
        out.push_back(halfbits[i + 1]);
    }
    return BitStream(std::move(out));
}

BitStream ook_map(const BitStream& bits)
{
    return bits;
}

BitStream line_encode(const BitStream& bits, LineCode scheme)
{
    return scheme == LineCode::manchester ? manchester_encode(bits) : ook_map(bits);
}

BitStream line_decode(const BitStream& symbols, LineCode scheme)
{
    return scheme == LineCode::manchester ? manchester_decode(symbols) : ook_map(symbols);
}

}  // namespace ramemit
