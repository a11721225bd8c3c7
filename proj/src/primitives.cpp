#include "wbsn/primitives.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <stdexcept>

namespace wbsn {

BitString sha1(const BitString& msg, OpCounter* ops) {
    if (ops) ops->hashes++;
    std::array<std::uint8_t, 20> digest{};
    unsigned int len = 0;
    static const std::uint8_t empty = 0;
    const std::uint8_t* data = msg.bytes().empty() ? &empty : msg.bytes().data();
    if (EVP_Digest(data, msg.bytes().size(), digest.data(), &len, EVP_sha1(), nullptr) != 1 ||
        len != digest.size()) {
        throw std::runtime_error("sha1: digest computation failed");
    }
    return BitString::from_bytes(digest, kHashBits);
}

std::uint32_t ts_distance(Timestamp a, Timestamp b) {
    const std::uint32_t forward = a.value - b.value;
    const std::uint32_t backward = b.value - a.value;
    return std::min(forward, backward);
}

BitString Rng::next_bits(std::size_t width) {
    const std::size_t nbytes = (width + 7) / 8;
    std::vector<std::uint8_t> bytes;
    bytes.reserve(((nbytes + 7) / 8) * 8);
    while (bytes.size() < nbytes) {
        std::uint64_t word = gen_();
        for (int shift = 56; shift >= 0; shift -= 8) {
            bytes.push_back(static_cast<std::uint8_t>(word >> shift));
        }
    }
    bytes.resize(nbytes);
    return BitString::from_bytes(bytes, width);
}

}  // namespace wbsn
