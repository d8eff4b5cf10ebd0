#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ramemit {

/// Ordered sequence of binary symbols. Every element is 0 or 1.
class BitStream {
public:
    BitStream() = default;
    BitStream(std::initializer_list<int> bits);
    explicit BitStream(std::vector<std::uint8_t> bits);

    /// Parses ASCII '0'/'1'; whitespace is ignored, anything else is a format error.
    static BitStream from_text(std::string_view text);
    /// Parses a hex string ("44 41 54 41", "0x44415441") into MSB-first bits.
    static BitStream from_hex(std::string_view hex);
    /// MSB-first expansion of each byte.
    static BitStream from_bytes(std::span<const std::uint8_t> bytes);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    void push_back(std::uint8_t bit);
    void append(const BitStream& other);
    /// Appends the low `width` bits of `value`, most significant first.
    void append_uint(std::uint32_t value, unsigned width);
    /// Reads `width` bits MSB-first starting at `offset`.
    std::uint32_t read_uint(std::size_t offset, unsigned width) const;
    BitStream slice(std::size_t offset, std::size_t count) const;

    std::string to_text() const;
    /// Lowercase hex without separators; size must be a multiple of 8.
    std::string to_hex() const;
    std::vector<std::uint8_t> to_bytes() const;

    friend bool operator==(const BitStream&, const BitStream&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const BitStream& a, const BitStream& b);

}  // namespace ramemit
