#pragma once

#include "ramemit/bitstream.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace ramemit {

/// Symbol-level mapping applied before waveform synthesis.
enum class LineCode {
    ook_direct,
    manchester,
};

std::string_view to_string(LineCode scheme) noexcept;
/// Accepts "ook" / "ook_direct" / "manchester"; throws a config error otherwise.
LineCode parse_line_code(std::string_view name);

inline constexpr std::size_t preamble_bits = 8;
inline constexpr std::size_t length_field_bits = 16;
inline constexpr std::size_t crc_bits = 16;
/// Bits added around a payload: preamble, length field and checksum.
inline constexpr std::size_t frame_overhead_bits = preamble_bits + length_field_bits + crc_bits;
inline constexpr std::size_t max_payload_bits = 0xFFFF;

/// The alternating synchronization pattern 1,0,1,0,1,0,1,0.
const BitStream& preamble();

/// CRC-16/CCITT-FALSE (poly 0x1021, init 0xFFFF, no reflection, no final xor),
/// computed bit-serially so inputs need not be byte aligned.
std::uint16_t crc16_ccitt(std::span<const std::uint8_t> bits);

/// On-air unit: preamble, 16-bit payload length, payload, CRC-16 over length+payload.
struct Frame {
    BitStream preamble;
    std::uint16_t length_field = 0;
    BitStream payload;
    std::uint16_t crc = 0;

    /// preamble ∥ length (MSB first) ∥ payload ∥ crc (MSB first).
    BitStream serialize() const;
    std::size_t serialized_bits() const noexcept { return frame_overhead_bits + payload.size(); }

    friend bool operator==(const Frame&, const Frame&) = default;
};

/// Throws ErrorKind::size if the payload exceeds 65535 bits.
Frame build_frame(const BitStream& payload);

/// Result of frame recovery. A CRC mismatch still yields the payload so that
/// bit errors can be counted; `crc_valid` is false in that case.
struct ParsedFrame {
    Frame frame;
    bool crc_valid = false;

    /// Throws ErrorKind::integrity if the checksum did not verify.
    const Frame& require_valid() const;
};

/// `bits` must start at the first preamble bit. Trailing bits beyond the
/// frame are ignored.
///
/// Throws ErrorKind::sync on a preamble mismatch and ErrorKind::truncation if
/// the stream ends before the declared payload and checksum.
ParsedFrame parse_frame(const BitStream& bits);

/// Receiver-side variant. With `check_preamble` false the first eight bits are
/// taken as-is (sync was already established by correlation). With
/// `payload_bits` set the payload length comes from the caller instead of the
/// length field; the frame then only verifies if the length field agrees.
struct FrameParseOptions {
    bool check_preamble = true;
    std::optional<std::size_t> payload_bits;
};
ParsedFrame parse_frame(const BitStream& bits, const FrameParseOptions& options);

/// Bit 1 -> (0,1), bit 0 -> (1,0).
BitStream manchester_encode(const BitStream& bits);

/// Inverse of manchester_encode. Throws ErrorKind::format on odd length and
/// CodeViolation (carrying the bit index) on a (0,0) or (1,1) pair.
BitStream manchester_decode(const BitStream& halfbits);

/// On-off keying is the identity at symbol level: 1 = carrier on, 0 = off.
BitStream ook_map(const BitStream& bits);

/// Dispatches to ook_map or manchester_encode.
BitStream line_encode(const BitStream& bits, LineCode scheme);
BitStream line_decode(const BitStream& symbols, LineCode scheme);

/// Line-coded symbols per payload bit (1 for OOK, 2 for Manchester).
constexpr std::size_t symbols_per_bit(LineCode scheme) noexcept
{
    return scheme == LineCode::manchester ? 2 : 1;
}

}  // namespace ramemit
