#include "wbsn/nodes.hpp"

namespace wbsn {

namespace {

BitString ts_bits(Timestamp t) { return BitString::from_u32(t.value); }

// Session key material: m1 || r_n || a_n || r_h || t_n || m4 || t_h.
// Both ends evaluate the same expression over the values they hold.
SessionKey derive_session_key(const BitString& m1, const Nonce& r_n, const BitString& a_n,
                              const Nonce& r_h, Timestamp t_n, const BitString& m4,
                              Timestamp t_h, OpCounter* ops) {
    return sha1(concat(m1, r_n, a_n, r_h, ts_bits(t_n), m4, ts_bits(t_h)), ops);
}

}  // namespace

SnBegin sn_begin_auth(const SensorCredentials& creds, SimClock& clock, Rng& rng,
                      OpCounter* ops) {
    const Timestamp t_n = clock.now();
    const Nonce r_n = rng.next_nonce();

    const BitString m1 = xor_bits(creds.a_n, r_n, ops);
    // id_n ^ b_n equals the hub's key mix, so the sensor never has to store
    // either key to produce it.
    const BitString key_mix = xor_bits(creds.id_n, creds.b_n, ops);
    const BitString m2 =
        xor_bits(concat(key_mix, ts_bits(t_n)), concat(ts_bits(t_n), r_n), ops);

    return SnBegin{Message1{m1, m2, t_n}, PendingSession{r_n, t_n, m1}};
}

Message2 in_forward_up(const IntermediateState& relay, const Message1& msg) {
    return Message2{msg.m1, msg.m2, msg.t_n, relay.id_in};
}

BitString hub_scan_peel(const BitString& k_hn, Timestamp t_n, const BitString& m2,
                        OpCounter* ops) {
    return xor_bits(m2, concat(k_hn, ts_bits(t_n)), ops);
}

bool hub_entry_matches(const BitString& peeled, Timestamp t_n, const BitString& m1,
                       const BitString& cand_k, const BitString& cand_a, OpCounter* ops) {
    // For the honest sender, m2 ^ (k_hn || t_n) == (k_n || 0^32) ^ (t_n || r_n),
    // so the candidate's a must re-derive a nonce from m1 that cancels the
    // peeled value down to (cand_k || zeros).
    const BitString candidate_nonce = xor_bits(m1, cand_a, ops);
    const BitString probe = xor_bits(peeled, concat(ts_bits(t_n), candidate_nonce), ops);
    return probe == concat(cand_k, BitString(kTimestampBits));
}

Result<HnAccept> hn_process(HubState& hub, const Message2& msg, SimClock& clock, Rng& rng,
                            const FreshnessPolicy& policy, OpCounter* ops) {
    if (!hub.knows_intermediate(msg.id_in)) return ProtoError::UnknownIntermediate;

    const Timestamp t_c = clock.now();
    if (ts_distance(t_c, msg.t_n) >= policy.delta_t) return ProtoError::StaleTimestamp;

    const BitString peeled = hub_scan_peel(hub.k_hn, msg.t_n, msg.m2, ops);

    constexpr std::size_t kNoMatch = static_cast<std::size_t>(-1);
    std::size_t match = kNoMatch;
    for (std::size_t i = 0; i < hub.table.size(); ++i) {
        const HubEntry& entry = hub.table[i];
        const bool hit = hub_entry_matches(peeled, msg.t_n, msg.m1, entry.k_n, entry.a_n, ops);
        if (hit && match == kNoMatch) {
            match = i;
        }
        // keep scanning: a full pass makes the xor count deterministic in n
    }
    if (match == kNoMatch) return ProtoError::NoMatchingSensor;

    HubEntry& entry = hub.table[match];
    const Nonce r_n = xor_bits(msg.m1, entry.a_n, ops);
    const Timestamp t_h = clock.now();
    const Nonce r_h = rng.next_nonce();

    const BitString m3 = xor_bits(entry.a_n, r_h, ops);
    const BitString tag = sha1(concat(entry.a_n, r_n, r_h), ops);
    const BitString m4 = xor_bits(xor_bits(hub.k_hn, entry.k_n, ops), tag, ops);

    const SessionKey key =
        derive_session_key(msg.m1, r_n, entry.a_n, r_h, msg.t_n, m4, t_h, ops);
    entry.session_key = key;

    return HnAccept{Message3{m3, m4, t_h, msg.id_in}, key};
}

Result<Message4> in_forward_down(const IntermediateState& relay, const Message3& msg) {
    if (msg.id_in != relay.id_in) return ProtoError::WrongIntermediate;
    return Message4{msg.m3, msg.m4, msg.t_h};
}

Result<SessionKey> sn_complete_auth(SensorCredentials& creds, PendingSession pending,
                                    const Message4& msg, SimClock& clock,
                                    const FreshnessPolicy& policy, OpCounter* ops) {
    const Timestamp t_c = clock.now();
    if (ts_distance(t_c, msg.t_h) >= policy.delta_t) return ProtoError::StaleTimestamp;

    const Nonce r_h = xor_bits(msg.m3, creds.a_n, ops);
    const BitString expected_tag = sha1(concat(creds.a_n, pending.r_n, r_h), ops);
    const BitString presented_tag =
        xor_bits(xor_bits(msg.m4, creds.id_n, ops), creds.b_n, ops);
    if (presented_tag != expected_tag) return ProtoError::AuthFailed;

    const SessionKey key = derive_session_key(pending.m1, pending.r_n, creds.a_n, r_h,
                                              pending.t_n, msg.m4, msg.t_h, ops);
    creds.session_key = key;
    return key;
}

}  // namespace wbsn
