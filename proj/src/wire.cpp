#include "wbsn/wire.hpp"

#include <ostream>
#include <stdexcept>

namespace wbsn {

namespace {

void append(std::vector<std::uint8_t>& out, const BitString& s) {
    out.insert(out.end(), s.bytes().begin(), s.bytes().end());
}

BitString take(std::span<const std::uint8_t>& rest, std::size_t width) {
    const std::size_t n = width / 8;
    BitString s = BitString::from_bytes(rest.first(n), width);
    rest = rest.subspan(n);
    return s;
}

}  // namespace

std::vector<std::uint8_t> encode(const Message1& f) {
    std::vector<std::uint8_t> out;
    out.reserve(kMessage1Bytes);
    append(out, f.m1);
    append(out, f.m2);
    append(out, BitString::from_u32(f.t_n.value));
    return out;
}

std::vector<std::uint8_t> encode(const Message2& f) {
    std::vector<std::uint8_t> out;
    out.reserve(kMessage2Bytes);
    append(out, f.m1);
    append(out, f.m2);
    append(out, BitString::from_u32(f.t_n.value));
    append(out, f.id_in);
    return out;
}

std::vector<std::uint8_t> encode(const Message3& f) {
    std::vector<std::uint8_t> out;
    out.reserve(kMessage3Bytes);
    append(out, f.m3);
    append(out, f.m4);
    append(out, BitString::from_u32(f.t_h.value));
    append(out, f.id_in);
    return out;
}

std::vector<std::uint8_t> encode(const Message4& f) {
    std::vector<std::uint8_t> out;
    out.reserve(kMessage4Bytes);
    append(out, f.m3);
    append(out, f.m4);
    append(out, BitString::from_u32(f.t_h.value));
    return out;
}

Result<Message1> decode_message1(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kMessage1Bytes) return ProtoError::WrongLength;
    Message1 f;
    f.m1 = take(bytes, kHashBits);
    f.m2 = take(bytes, kHashBits + kTimestampBits);
    f.t_n = Timestamp{take(bytes, kTimestampBits).as_u32()};
    return f;
}

Result<Message2> decode_message2(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kMessage2Bytes) return ProtoError::WrongLength;
    Message2 f;
    f.m1 = take(bytes, kHashBits);
    f.m2 = take(bytes, kHashBits + kTimestampBits);
    f.t_n = Timestamp{take(bytes, kTimestampBits).as_u32()};
    f.id_in = take(bytes, kRelayIdBits);
    return f;
}

Result<Message3> decode_message3(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kMessage3Bytes) return ProtoError::WrongLength;
    Message3 f;
    f.m3 = take(bytes, kHashBits);
    f.m4 = take(bytes, kHashBits);
    f.t_h = Timestamp{take(bytes, kTimestampBits).as_u32()};
    f.id_in = take(bytes, kRelayIdBits);
    return f;
}

Result<Message4> decode_message4(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kMessage4Bytes) return ProtoError::WrongLength;
    Message4 f;
    f.m3 = take(bytes, kHashBits);
    f.m4 = take(bytes, kHashBits);
    f.t_h = Timestamp{take(bytes, kTimestampBits).as_u32()};
    return f;
}

std::string_view to_string(ProtoError e) {
    switch (e) {
        case ProtoError::WrongLength: return "WrongLength";
        case ProtoError::UnknownIntermediate: return "UnknownIntermediate";
        case ProtoError::StaleTimestamp: return "StaleTimestamp";
        case ProtoError::NoMatchingSensor: return "NoMatchingSensor";
        case ProtoError::WrongIntermediate: return "WrongIntermediate";
        case ProtoError::AuthFailed: return "AuthFailed";
        case ProtoError::MessageLost: return "MessageLost";
    }
    return "?";
}

std::string_view hop_name(Hop hop) {
    switch (hop) {
        case Hop::SnToIn: return "SN->IN";
        case Hop::InToHn: return "IN->HN";
        case Hop::HnToIn: return "HN->IN";
        case Hop::InToSn: return "IN->SN";
    }
    return "?";
}

Hop hop_from_name(std::string_view name) {
    for (Hop h : {Hop::SnToIn, Hop::InToHn, Hop::HnToIn, Hop::InToSn}) {
        if (hop_name(h) == name) return h;
    }
    throw std::invalid_argument("unknown hop name: " + std::string(name));
}

void write_transcript(std::ostream& out, const Transcript& t) {
    static const char* digits = "0123456789abcdef";
    for (const auto& rec : t.records) {
        if (!rec.delivered) continue;
        out << hop_name(rec.hop) << ',' << rec.time.value << ',';
        for (std::uint8_t b : rec.bytes) {
            out << digits[b >> 4] << digits[b & 0x0F];
        }
        out << '\n';
    }
}

}  // namespace wbsn
