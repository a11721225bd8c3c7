#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wbsn {

// Per-session instrumentation counters. Protocol code routes every hash and
// xor through the counted entry points below so cost reports reflect actual
// primitive invocations.
struct OpCounter {
    std::uint64_t hashes = 0;
    std::uint64_t xors = 0;
};

/// Fixed-width bit string, MSB-first packing, big-endian byte serialization.
/// Width is fixed at construction; binary operations require equal widths.
class BitString {
public:
    BitString() = default;

    // All-zero string of the given width.
    explicit BitString(std::size_t width);

    static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t width);
    static BitString from_hex(std::string_view hex);  // width = 4 * hex.size()
    static BitString from_u32(std::uint32_t v);       // width 32
    static BitString from_u16(std::uint16_t v);       // width 16

    std::size_t width() const { return width_; }
    // ceil(width/8) bytes; unused low bits of the last byte are zero.
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

    std::string hex() const;  // lowercase
    std::uint32_t as_u32() const;
    std::uint16_t as_u16() const;

    bool bit(std::size_t i) const;  // i = 0 is the MSB
    void flip_bit(std::size_t i);

    bool operator==(const BitString&) const = default;

private:
    std::size_t width_ = 0;
    std::vector<std::uint8_t> bytes_;
};

// Counted xor; widths must match. `ops`, when given, ticks once per call.
BitString xor_bits(const BitString& a, const BitString& b, OpCounter* ops = nullptr);

inline BitString operator^(const BitString& a, const BitString& b) {
    return xor_bits(a, b);
}

// a occupies the most-significant width(a) bits of the result.
BitString concat(const BitString& a, const BitString& b);

template <typename... Rest>
BitString concat(const BitString& a, const BitString& b, const Rest&... rest) {
    return concat(concat(a, b), rest...);
}

// Inverse of concat: (high `high_width` bits, remaining low bits).
// Requires 0 < high_width < s.width().
std::pair<BitString, BitString> split(const BitString& s, std::size_t high_width);

}  // namespace wbsn
