#include "ramemit/bitstream.hpp"

#include "ramemit/error.hpp"

#include <algorithm>
#include <cctype>

namespace ramemit {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::size: return "size";
    case ErrorKind::format: return "format";
    case ErrorKind::code_violation: return "code-violation";
    case ErrorKind::sync: return "sync";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::integrity: return "integrity";
    case ErrorKind::config: return "config";
    case ErrorKind::domain: return "domain";
    case ErrorKind::calibration: return "calibration";
    case ErrorKind::no_signal: return "no-signal";
    case ErrorKind::estimation: return "estimation";
    case ErrorKind::capability: return "capability";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

namespace {

std::uint8_t checked_bit(int value)
{
    if (value != 0 && value != 1) {
        throw Error(ErrorKind::format, "bit value must be 0 or 1, got " + std::to_string(value));
    }
    return static_cast<std::uint8_t>(value);
}

int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

BitStream::BitStream(std::initializer_list<int> bits)
{
    bits_.reserve(bits.size());
    for (int b : bits) bits_.push_back(checked_bit(b));
}

BitStream::BitStream(std::vector<std::uint8_t> bits) : bits_(std::move(bits))
{
    for (auto b : bits_) checked_bit(b);
}

BitStream BitStream::from_text(std::string_view text)
{
    BitStream out;
    out.bits_.reserve(text.size());
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c != '0' && c != '1') {
            throw Error(ErrorKind::format, std::string("invalid bit character '") + c + "'");
        }
        out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

BitStream BitStream::from_hex(std::string_view hex)
{
    std::string digits;
    for (std::size_t i = 0; i < hex.size(); ++i) {
        char c = hex[i];
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '0' && i + 1 < hex.size() && (hex[i + 1] == 'x' || hex[i + 1] == 'X')) {
            ++i;
            continue;
        }
        if (hex_value(c) < 0) {
            throw Error(ErrorKind::format, std::string("invalid hex character '") + c + "'");
        }
        digits.push_back(c);
    }
    if (digits.size() % 2 != 0) {
        throw Error(ErrorKind::format, "hex payload has an odd number of digits");
    }
    std::vector<std::uint8_t> bytes;
    for (std::size_t i = 0; i < digits.size(); i += 2) {
        bytes.push_back(static_cast<std::uint8_t>(hex_value(digits[i]) << 4 | hex_value(digits[i + 1])));
    }
    return from_bytes(bytes);
}

BitStream BitStream::from_bytes(std::span<const std::uint8_t> bytes)
{
    BitStream out;
    out.bits_.reserve(bytes.size() * 8);
    for (auto byte : bytes) out.append_uint(byte, 8);
    return out;
}

void BitStream::push_back(std::uint8_t bit)
{
    bits_.push_back(checked_bit(bit));
}

void BitStream::append(const BitStream& other)
{
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

void BitStream::append_uint(std::uint32_t value, unsigned width)
{
    for (unsigned i = width; i-- > 0;) {
        bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
    }
}

std::uint32_t BitStream::read_uint(std::size_t offset, unsigned width) const
{
    if (offset + width > bits_.size()) {
        throw Error(ErrorKind::truncation, "read past end of bit stream");
    }
    std::uint32_t value = 0;
    for (unsigned i = 0; i < width; ++i) value = value << 1 | bits_[offset + i];
    return value;
}

BitStream BitStream::slice(std::size_t offset, std::size_t count) const
{
    if (offset > bits_.size() || count > bits_.size() - offset) {
        throw Error(ErrorKind::truncation, "slice past end of bit stream");
    }
    BitStream out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                     bits_.begin() + static_cast<std::ptrdiff_t>(offset + count));
    return out;
}

std::string BitStream::to_text() const
{
    std::string s(bits_.size(), '0');
    std::transform(bits_.begin(), bits_.end(), s.begin(),
                   [](std::uint8_t b) { return static_cast<char>('0' + b); });
    return s;
}

std::vector<std::uint8_t> BitStream::to_bytes() const
{
    if (bits_.size() % 8 != 0) {
        throw Error(ErrorKind::format, "bit count is not a multiple of 8");
    }
    std::vector<std::uint8_t> bytes(bits_.size() / 8);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = static_cast<std::uint8_t>(read_uint(i * 8, 8));
    }
    return bytes;
}

std::string BitStream::to_hex() const
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (auto byte : to_bytes()) {
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 0xf]);
    }
    return out;
}

std::size_t hamming_distance(const BitStream& a, const BitStream& b)
{
    std::size_t n = std::min(a.size(), b.size());
    std::size_t d = std::max(a.size(), b.size()) - n;
    for (std::size_t i = 0; i < n; ++i) d += a[i] != b[i];
    return d;
}

}  // namespace ramemit
