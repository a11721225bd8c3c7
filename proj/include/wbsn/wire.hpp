#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wbsn/primitives.hpp"
#include "wbsn/result.hpp"

namespace wbsn {

// The four handshake frames. Field order on the wire is declaration order,
// MSB-first; the relay id rides last because the relay appends it to (and
// strips it from) an otherwise untouched frame. There is no kind tag: kind is
// implied by hop direction and length.

struct Message1 {  // sensor -> relay, 384 bits
    BitString m1;  // 160
    BitString m2;  // 192
    Timestamp t_n;
    bool operator==(const Message1&) const = default;
};

struct Message2 {  // relay -> hub, 400 bits
    BitString m1;
    BitString m2;
    Timestamp t_n;
    BitString id_in;  // 16
    bool operator==(const Message2&) const = default;
};

struct Message3 {  // hub -> relay, 368 bits
    BitString m3;  // 160
    BitString m4;  // 160
    Timestamp t_h;
    BitString id_in;
    bool operator==(const Message3&) const = default;
};

struct Message4 {  // relay -> sensor, 352 bits
    BitString m3;
    BitString m4;
    Timestamp t_h;
    bool operator==(const Message4&) const = default;
};

inline constexpr std::size_t kMessage1Bytes = 48;
inline constexpr std::size_t kMessage2Bytes = 50;
inline constexpr std::size_t kMessage3Bytes = 46;
inline constexpr std::size_t kMessage4Bytes = 44;

std::vector<std::uint8_t> encode(const Message1& f);
std::vector<std::uint8_t> encode(const Message2& f);
std::vector<std::uint8_t> encode(const Message3& f);
std::vector<std::uint8_t> encode(const Message4& f);

// Decoding is total on correct-length input; the only failure is WrongLength.
// Semantic checks live in the nodes.
Result<Message1> decode_message1(std::span<const std::uint8_t> bytes);
Result<Message2> decode_message2(std::span<const std::uint8_t> bytes);
Result<Message3> decode_message3(std::span<const std::uint8_t> bytes);
Result<Message4> decode_message4(std::span<const std::uint8_t> bytes);

/// The four hops of one handshake, in protocol order.
enum class Hop { SnToIn = 0, InToHn = 1, HnToIn = 2, InToSn = 3 };

std::string_view hop_name(Hop hop);  // "SN->IN", "IN->HN", "HN->IN", "IN->SN"
Hop hop_from_name(std::string_view name);  // throws std::invalid_argument

/// Everything an eavesdropper on all links would log: every frame placed on
/// any hop, including tampered, replayed, and subsequently dropped ones.
struct TranscriptRecord {
    Timestamp time;  // when the frame was placed on the hop
    Hop hop;
    std::vector<std::uint8_t> bytes;
    std::string note;       // adversary annotation, empty for honest frames
    bool delivered = true;  // false when the adversary removed it in flight
};

struct Transcript {
    std::vector<TranscriptRecord> records;
};

// One line per delivered frame: `direction,sim_time,hex(bytes)`.
void write_transcript(std::ostream& out, const Transcript& t);

}  // namespace wbsn
