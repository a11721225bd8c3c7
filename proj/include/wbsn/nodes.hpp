#pragma once

#include "wbsn/registry.hpp"
#include "wbsn/result.hpp"
#include "wbsn/wire.hpp"

namespace wbsn {

/// Freshness window and channel timing. The scheme is secure only while
/// delta_t stays below the minimum attack turnaround, so both values are
/// scenario knobs rather than constants.
struct FreshnessPolicy {
    std::uint32_t delta_t = 5;
    std::uint32_t per_hop_delay = 1;
};

/// Sensor-side state alive between the first message and the final reply.
/// Single use: consumed on completion, discarded on any failure.
struct PendingSession {
    Nonce r_n;
    Timestamp t_n;
    BitString m1;
};

struct SnBegin {
    Message1 msg;
    PendingSession pending;
};

// Step 1. Draws t_n and r_n, masks them into m1/m2. No hashing here; the
// sensor spends three xors (m1, the id/b mask, the 192-bit combine).
SnBegin sn_begin_auth(const SensorCredentials& creds, SimClock& clock, Rng& rng,
                      OpCounter* ops = nullptr);

// Step 2. Appends the relay's own id; the original 384 bits pass through
// untouched.
Message2 in_forward_up(const IntermediateState& relay, const Message1& msg);

struct HnAccept {
    Message3 msg;
    SessionKey key;
};

// The two pieces of the hub's table scan, exposed so they can be driven
// directly against an independent re-derivation. hub_scan_peel strips the
// master key and timestamp off m2 once; hub_entry_matches then costs exactly
// two xors per candidate.
BitString hub_scan_peel(const BitString& k_hn, Timestamp t_n, const BitString& m2,
                        OpCounter* ops = nullptr);
bool hub_entry_matches(const BitString& peeled, Timestamp t_n, const BitString& m1,
                       const BitString& cand_k, const BitString& cand_a,
                       OpCounter* ops = nullptr);

// Step 3. Verifies the relay id and freshness, scans the table for the unique
// (k, a) entry consistent with (m1, m2), then derives the reply and the
// session key. The scan always walks the whole table so the xor cost stays a
// fixed function of its size.
Result<HnAccept> hn_process(HubState& hub, const Message2& msg, SimClock& clock, Rng& rng,
                            const FreshnessPolicy& policy, OpCounter* ops = nullptr);

// Step 4. Strips the relay id if it is ours; otherwise the frame is not for
// this relay and gets dropped.
Result<Message4> in_forward_down(const IntermediateState& relay, const Message3& msg);

// Step 5. Checks freshness, recovers r_h, verifies the confirmation tag, and
// derives the session key. The pending session is consumed either way;
// failures mean the sensor retries from scratch with fresh t_n and r_n.
Result<SessionKey> sn_complete_auth(SensorCredentials& creds, PendingSession pending,
                                    const Message4& msg, SimClock& clock,
                                    const FreshnessPolicy& policy, OpCounter* ops = nullptr);

}  // namespace wbsn
