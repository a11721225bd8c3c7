#include "sha1_oracle.hpp"

namespace oracle {

namespace {

inline std::uint32_t rotl(std::uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }

}  // namespace

std::array<std::uint8_t, 20> sha1(const std::uint8_t* data, std::size_t len) {
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

    std::vector<std::uint8_t> msg;
    msg.reserve(len + 72);
    msg.insert(msg.end(), data, data + len);
    const std::uint64_t bit_len = static_cast<std::uint64_t>(len) * 8;
    msg.push_back(0x80);
    while (msg.size() % 64 != 56) msg.push_back(0);
    for (int i = 7; i >= 0; --i) {
        msg.push_back(static_cast<std::uint8_t>(bit_len >> (8 * i)));
    }

    for (std::size_t block = 0; block < msg.size(); block += 64) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i) {
            w[i] = (static_cast<std::uint32_t>(msg[block + 4 * i]) << 24) |
                   (static_cast<std::uint32_t>(msg[block + 4 * i + 1]) << 16) |
                   (static_cast<std::uint32_t>(msg[block + 4 * i + 2]) << 8) |
                   static_cast<std::uint32_t>(msg[block + 4 * i + 3]);
        }
        for (int i = 16; i < 80; ++i) {
            w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        }
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t tmp = rotl(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rotl(b, 30);
            b = a;
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    std::array<std::uint8_t, 20> out;
    for (int i = 0; i < 5; ++i) {
        out[4 * i] = static_cast<std::uint8_t>(h[i] >> 24);
        out[4 * i + 1] = static_cast<std::uint8_t>(h[i] >> 16);
        out[4 * i + 2] = static_cast<std::uint8_t>(h[i] >> 8);
        out[4 * i + 3] = static_cast<std::uint8_t>(h[i]);
    }
    return out;
}

std::array<std::uint8_t, 20> sha1(const std::vector<std::uint8_t>& data) {
    static const std::uint8_t empty = 0;
    return sha1(data.empty() ? &empty : data.data(), data.size());
}

namespace {

std::string to_hex(const std::array<std::uint8_t, 20>& digest) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(40);
    for (std::uint8_t b : digest) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0F]);
    }
    return out;
}

}  // namespace

std::string sha1_hex(const std::vector<std::uint8_t>& data) { return to_hex(sha1(data)); }

std::string sha1_hex(const std::string& text) {
    return to_hex(sha1(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace oracle
