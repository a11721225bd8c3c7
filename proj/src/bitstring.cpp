#include "wbsn/bitstring.hpp"

#include <algorithm>
#include <stdexcept>

namespace wbsn {

namespace {

std::size_t byte_len(std::size_t width) { return (width + 7) / 8; }

// Zero the unused low bits of the last byte so equality stays well defined.
void mask_tail(std::vector<std::uint8_t>& bytes, std::size_t width) {
    if (width % 8 != 0 && !bytes.empty()) {
        const std::uint8_t keep = static_cast<std::uint8_t>(0xFF << (8 - width % 8));
        bytes.back() &= keep;
    }
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

BitString::BitString(std::size_t width) : width_(width), bytes_(byte_len(width), 0) {}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes, std::size_t width) {
    if (bytes.size() != byte_len(width)) {
        throw std::invalid_argument("BitString::from_bytes: byte count does not match width");
    }
    BitString s(width);
    std::copy(bytes.begin(), bytes.end(), s.bytes_.begin());
    mask_tail(s.bytes_, width);
    return s;
}

BitString BitString::from_hex(std::string_view hex) {
    BitString s(hex.size() * 4);
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const int d = hex_digit(hex[i]);
        if (d < 0) throw std::invalid_argument("BitString::from_hex: non-hex character");
        s.bytes_[i / 2] |= static_cast<std::uint8_t>(i % 2 == 0 ? d << 4 : d);
    }
    return s;
}

BitString BitString::from_u32(std::uint32_t v) {
    BitString s(32);
    s.bytes_[0] = static_cast<std::uint8_t>(v >> 24);
    s.bytes_[1] = static_cast<std::uint8_t>(v >> 16);
    s.bytes_[2] = static_cast<std::uint8_t>(v >> 8);
    s.bytes_[3] = static_cast<std::uint8_t>(v);
    return s;
}

BitString BitString::from_u16(std::uint16_t v) {
    BitString s(16);
    s.bytes_[0] = static_cast<std::uint8_t>(v >> 8);
    s.bytes_[1] = static_cast<std::uint8_t>(v);
    return s;
}

std::string BitString::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 2);
    for (std::uint8_t b : bytes_) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0F]);
    }
    // trim to nibble granularity for widths that are not byte multiples
    out.resize((width_ + 3) / 4);
    return out;
}

std::uint32_t BitString::as_u32() const {
    if (width_ != 32) throw std::invalid_argument("BitString::as_u32: width is not 32");
    return (static_cast<std::uint32_t>(bytes_[0]) << 24) |
           (static_cast<std::uint32_t>(bytes_[1]) << 16) |
           (static_cast<std::uint32_t>(bytes_[2]) << 8) | bytes_[3];
}

std::uint16_t BitString::as_u16() const {
    if (width_ != 16) throw std::invalid_argument("BitString::as_u16: width is not 16");
    return static_cast<std::uint16_t>((bytes_[0] << 8) | bytes_[1]);
}

bool BitString::bit(std::size_t i) const {
    if (i >= width_) throw std::out_of_range("BitString::bit: index past width");
    return (bytes_[i / 8] >> (7 - i % 8)) & 1;
}

void BitString::flip_bit(std::size_t i) {
    if (i >= width_) throw std::out_of_range("BitString::flip_bit: index past width");
    bytes_[i / 8] ^= static_cast<std::uint8_t>(1u << (7 - i % 8));
}

BitString xor_bits(const BitString& a, const BitString& b, OpCounter* ops) {
    if (a.width() != b.width()) {
        throw std::invalid_argument("xor_bits: width mismatch");
    }
    if (ops) ops->xors++;
    std::vector<std::uint8_t> out(a.bytes().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = a.bytes()[i] ^ b.bytes()[i];
    }
    return BitString::from_bytes(out, a.width());
}

BitString concat(const BitString& a, const BitString& b) {
    if (a.width() % 8 == 0) {
        std::vector<std::uint8_t> out = a.bytes();
        out.insert(out.end(), b.bytes().begin(), b.bytes().end());
        return BitString::from_bytes(out, a.width() + b.width());
    }
    // unaligned left operand: place bits one by one
    BitString out(a.width() + b.width());
    for (std::size_t i = 0; i < a.width(); ++i) {
        if (a.bit(i)) out.flip_bit(i);
    }
    for (std::size_t i = 0; i < b.width(); ++i) {
        if (b.bit(i)) out.flip_bit(a.width() + i);
    }
    return out;
}

std::pair<BitString, BitString> split(const BitString& s, std::size_t high_width) {
    if (high_width == 0 || high_width >= s.width()) {
        throw std::invalid_argument("split: high_width out of range");
    }
    const std::size_t low_width = s.width() - high_width;
    if (high_width % 8 == 0) {
        const auto& bytes = s.bytes();
        const std::size_t cut = high_width / 8;
        BitString high = BitString::from_bytes(std::span(bytes.data(), cut), high_width);
        BitString low = BitString::from_bytes(
            std::span(bytes.data() + cut, bytes.size() - cut), low_width);
        return {std::move(high), std::move(low)};
    }
    BitString high(high_width);
    BitString low(low_width);
    for (std::size_t i = 0; i < high_width; ++i) {
        if (s.bit(i)) high.flip_bit(i);
    }
    for (std::size_t i = 0; i < low_width; ++i) {
        if (s.bit(high_width + i)) low.flip_bit(i);
    }
    return {std::move(high), std::move(low)};
}

}  // namespace wbsn
