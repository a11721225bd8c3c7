#pragma once

#include <cstdint>
#include <random>

#include "wbsn/bitstring.hpp"

namespace wbsn {

// Parameter widths shared across the protocol. Hash output fixes most of them.
inline constexpr std::size_t kHashBits = 160;
inline constexpr std::size_t kIdBits = 160;
inline constexpr std::size_t kKeyBits = 160;
inline constexpr std::size_t kNonceBits = 160;
inline constexpr std::size_t kTimestampBits = 32;
inline constexpr std::size_t kRelayIdBits = 16;

using Nonce = BitString;       // 160-bit, drawn from a seeded Rng
using SessionKey = BitString;  // 160-bit hash output

// SHA-1 of the byte serialization of msg (no length prefix, no separators).
// `ops`, when given, ticks once per call.
BitString sha1(const BitString& msg, OpCounter* ops = nullptr);

/// 32-bit simulated time, arithmetic modulo 2^32.
struct Timestamp {
    std::uint32_t value = 0;
    bool operator==(const Timestamp&) const = default;
};

// |a - b| with wraparound: min(a-b, b-a) mod 2^32.
std::uint32_t ts_distance(Timestamp a, Timestamp b);

/// Monotonic simulated clock. Ticks are kept in 64 bits internally so event
/// ordering never wraps; timestamps handed to nodes are the low 32 bits.
class SimClock {
public:
    SimClock() = default;
    explicit SimClock(std::uint64_t start) : ticks_(start) {}

    Timestamp now() const { return Timestamp{static_cast<std::uint32_t>(ticks_)}; }
    std::uint64_t ticks() const { return ticks_; }

    void advance(std::uint64_t by) { ticks_ += by; }
    void advance_to(std::uint64_t target) {
        if (target > ticks_) ticks_ = target;
    }

private:
    std::uint64_t ticks_ = 0;
};

/// Deterministic bit-string source. Same seed, same sequence; each draw of
/// width w consumes ceil(ceil(w/8)/8) engine outputs, serialized big-endian
/// and truncated to ceil(w/8) bytes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    BitString next_bits(std::size_t width);
    Nonce next_nonce() { return next_bits(kNonceBits); }
    std::uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace wbsn
