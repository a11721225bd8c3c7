#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "sha1_oracle.hpp"
#include "wbsn/nodes.hpp"
#include "wbsn/simnet.hpp"

using namespace wbsn;

namespace {

BitString random_bits(std::mt19937_64& gen, std::size_t width) {
    std::vector<std::uint8_t> bytes(width / 8);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(gen());
    return BitString::from_bytes(bytes, width);
}

// One honest five-step exchange over a shared clock, one tick per hop.
struct Exchange {
    Message1 msg1;
    Message2 msg2;
    Result<HnAccept> hub = ProtoError::NoMatchingSensor;
    Result<Message4> msg4 = ProtoError::WrongIntermediate;
    Result<SessionKey> sn_key = ProtoError::AuthFailed;
    OpCounter sn_ops;
    OpCounter hn_ops;
};

Exchange honest_exchange(World& world, Rng& rng, std::size_t sensor = 0) {
    Exchange ex;
    auto begin = sn_begin_auth(world.sensors.at(sensor), world.clock, rng, &ex.sn_ops);
    ex.msg1 = begin.msg;
    world.clock.advance(1);
    ex.msg2 = in_forward_up(world.relays.at(0), ex.msg1);
    world.clock.advance(1);
    ex.hub = hn_process(world.hub, ex.msg2, world.clock, rng, world.policy, &ex.hn_ops);
    if (!ex.hub.ok()) return ex;
    world.clock.advance(1);
    ex.msg4 = in_forward_down(world.relays.at(0), ex.hub.value().msg);
    if (!ex.msg4.ok()) return ex;
    world.clock.advance(1);
    ex.sn_key = sn_complete_auth(world.sensors.at(sensor), begin.pending, ex.msg4.value(),
                                 world.clock, world.policy, &ex.sn_ops);
    return ex;
}

// Byte-level helpers for the independent reference evaluation.
std::vector<std::uint8_t> draw_bytes(std::mt19937_64& gen, std::size_t n) {
    std::vector<std::uint8_t> out;
    while (out.size() < n) {
        const std::uint64_t word = gen();
        for (int shift = 56; shift >= 0; shift -= 8) {
            out.push_back(static_cast<std::uint8_t>(word >> shift));
        }
    }
    out.resize(n);
    return out;
}

std::vector<std::uint8_t> bxor(std::vector<std::uint8_t> a,
                               const std::vector<std::uint8_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
    return a;
}

std::vector<std::uint8_t> bcat(std::vector<std::uint8_t> a,
                               const std::vector<std::uint8_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string bhex(const std::vector<std::uint8_t>& v) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::uint8_t b : v) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0F]);
    }
    return out;
}

}  // namespace

TEST_CASE("golden first frame, seed 7: reference evaluation and frozen fixture") {
    // Reference evaluation from scratch: replicate the deployment draws with a
    // bare engine, derive a via the oracle hash, build m1/m2 with byte xors.
    std::mt19937_64 admin(7);
    const auto k_hn = draw_bytes(admin, 20);
    const auto id_n = draw_bytes(admin, 20);
    const auto k_n = draw_bytes(admin, 20);

    std::mt19937_64 session(7);
    const auto r_n = draw_bytes(session, 20);
    const std::vector<std::uint8_t> t_n = {0, 0, 0, 0};  // fresh clock

    const auto a_n_digest = oracle::sha1(bcat(id_n, k_n));
    const std::vector<std::uint8_t> a_n(a_n_digest.begin(), a_n_digest.end());
    const auto m1 = bxor(a_n, r_n);
    const auto key_mix = bxor(k_hn, k_n);  // equals id_n ^ b_n by construction
    const auto m2 = bxor(bcat(key_mix, t_n), bcat(t_n, r_n));
    const std::string expected_hex = bhex(bcat(bcat(m1, m2), t_n));

    // Implementation path.
    World world = build_world(make_deployment(1, 1, 7));
    Rng rng(7);
    const auto begin = sn_begin_auth(world.sensors[0], world.clock, rng);
    CHECK(bhex(encode(begin.msg)) == expected_hex);

    // Frozen once from the reference evaluation above.
    CHECK(expected_hex ==
          "3ca386331090d51acd48e3c60ed2b71b01923cb9143f5cefa7771d17fef748c4"
          "062de27025ef01d41e0edcc100000000");
}

TEST_CASE("degenerate case: equal keys zero out the mix, exposing the m2 structure") {
    // With k_hn == k_n the masked value id ^ b collapses to zero, so
    // m2 = (0^160 || t) ^ (t || r) and m1 = a ^ r by construction.
    std::mt19937_64 gen(6);
    const BitString shared_key = random_bits(gen, 160);
    HubState hub = init_hub(shared_key);
    const BitString id_n = random_bits(gen, 160);
    SensorCredentials creds = register_sensor(hub, id_n, shared_key);
    CHECK((creds.id_n ^ creds.b_n) == BitString(160));

    SimClock clock(42);
    Rng rng(6);
    const auto begin = sn_begin_auth(creds, clock, rng);
    const BitString t_bits = BitString::from_u32(begin.msg.t_n.value);
    const BitString expected_m2 =
        concat(BitString(160), t_bits) ^ concat(t_bits, begin.pending.r_n);
    CHECK(begin.msg.m2 == expected_m2);
    CHECK(begin.msg.m1 == (creds.a_n ^ begin.pending.r_n));
}

TEST_CASE("nonce recovery: m1 xored with a reveals the session nonce") {
    World world = build_world(make_deployment(1, 1, 3));
    Rng rng(9);
    const auto begin = sn_begin_auth(world.sensors[0], world.clock, rng);
    CHECK((begin.msg.m1 ^ world.sensors[0].a_n) == begin.pending.r_n);
    CHECK(begin.pending.m1 == begin.msg.m1);
    CHECK(begin.pending.t_n == begin.msg.t_n);
}

TEST_CASE("honest runs agree on the session key: 1000 randomized trials") {
    std::mt19937_64 seeds(41);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + seeds() % 4;
        World world = build_world(make_deployment(n, 1, seeds()));
        Rng rng(seeds());
        const std::size_t sensor = seeds() % n;
        Exchange ex = honest_exchange(world, rng, sensor);
        REQUIRE(ex.sn_key.ok());
        CHECK(ex.sn_key.value() == ex.hub.value().key);
        CHECK(world.sensors[sensor].session_key == ex.sn_key.value());
        // hub stored the same key against the matched entry
        const auto& entry = world.hub.table[sensor];
        CHECK(entry.session_key == ex.hub.value().key);
    }
}

TEST_CASE("operation counts: sensor 2 hashes + 6 xors, hub 2 hashes + 2n+5 xors") {
    for (std::size_t n : {1u, 2u, 5u, 10u}) {
        World world = build_world(make_deployment(n, 1, 100 + n));
        Rng rng(5);
        Exchange ex = honest_exchange(world, rng, n - 1);  // scan cost is position free
        REQUIRE(ex.sn_key.ok());
        CHECK(ex.sn_ops.hashes == 2);
        CHECK(ex.sn_ops.xors == 6);
        CHECK(ex.hn_ops.hashes == 2);
        CHECK(ex.hn_ops.xors == 2 * n + 5);
    }
}

TEST_CASE("sensor spends 3 xors and no hash before any reply arrives") {
    World world = build_world(make_deployment(1, 1, 12));
    Rng rng(12);
    OpCounter ops;
    sn_begin_auth(world.sensors[0], world.clock, rng, &ops);
    CHECK(ops.xors == 3);
    CHECK(ops.hashes == 0);
}

TEST_CASE("relay forwarding is verbatim, +16 bits up and -16 bits down") {
    World world = build_world(make_deployment(1, 1, 13));
    Rng rng(13);
    const auto begin = sn_begin_auth(world.sensors[0], world.clock, rng);
    const Message2 up = in_forward_up(world.relays[0], begin.msg);
    CHECK(up.m1 == begin.msg.m1);
    CHECK(up.m2 == begin.msg.m2);
    CHECK(up.t_n == begin.msg.t_n);
    CHECK(up.id_in == world.relays[0].id_in);
    CHECK(encode(up).size() == encode(begin.msg).size() + 2);

    const Message3 down{begin.msg.m1, begin.msg.m1, Timestamp{4}, world.relays[0].id_in};
    const auto fwd = in_forward_down(world.relays[0], down);
    REQUIRE(fwd.ok());
    CHECK(fwd.value().m3 == down.m3);
    CHECK(fwd.value().m4 == down.m4);
    CHECK(fwd.value().t_h == down.t_h);
    CHECK(encode(fwd.value()).size() == encode(down).size() - 2);

    Message3 misrouted = down;
    misrouted.id_in = misrouted.id_in ^ BitString::from_hex("0001");
    CHECK(in_forward_down(world.relays[0], misrouted).error() ==
          ProtoError::WrongIntermediate);
}

TEST_CASE("hub rejections: unknown relay, stale timestamp, empty or wrong table") {
    World world = build_world(make_deployment(1, 1, 14));
    Rng rng(14);
    const auto begin = sn_begin_auth(world.sensors[0], world.clock, rng);
    const Message2 msg2 = in_forward_up(world.relays[0], begin.msg);

    SUBCASE("unknown relay id halts before anything else") {
        Message2 bad = msg2;
        bad.id_in = bad.id_in ^ BitString::from_hex("ffff");
        OpCounter ops;
        auto r = hn_process(world.hub, bad, world.clock, rng, world.policy, &ops);
        CHECK(r.error() == ProtoError::UnknownIntermediate);
        CHECK(ops.hashes == 0);
        CHECK(ops.xors == 0);
    }

    SUBCASE("freshness boundary is strict") {
        world.clock.advance(world.policy.delta_t - 1);
        CHECK(hn_process(world.hub, msg2, world.clock, rng, world.policy).ok());

        World world2 = build_world(make_deployment(1, 1, 14));
        Rng rng2(14);
        const auto begin2 = sn_begin_auth(world2.sensors[0], world2.clock, rng2);
        const Message2 fresh = in_forward_up(world2.relays[0], begin2.msg);
        world2.clock.advance(world2.policy.delta_t);
        OpCounter ops;
        auto r = hn_process(world2.hub, fresh, world2.clock, rng2, world2.policy, &ops);
        CHECK(r.error() == ProtoError::StaleTimestamp);
        CHECK(ops.hashes == 0);  // rejected before any hashing
    }

    SUBCASE("empty table cannot match") {
        HubState empty = init_hub(world.hub.k_hn);
        register_intermediate(empty, world.relays[0].id_in);
        auto r = hn_process(empty, msg2, world.clock, rng, world.policy);
        CHECK(r.error() == ProtoError::NoMatchingSensor);
    }

    SUBCASE("foreign credentials cannot match") {
        World other = build_world(make_deployment(3, 1, 999));
        other.relays[0] = register_intermediate(other.hub, msg2.id_in);
        auto r = hn_process(other.hub, msg2, other.clock, rng, other.policy);
        CHECK(r.error() == ProtoError::NoMatchingSensor);
    }
}

TEST_CASE("sensor rejections: stale reply and tampered fields") {
    World world = build_world(make_deployment(1, 1, 15));
    Rng rng(15);

    SUBCASE("late reply is stale at the boundary") {
        auto begin = sn_begin_auth(world.sensors[0], world.clock, rng);
        world.clock.advance(2);
        auto hub = hn_process(world.hub, in_forward_up(world.relays[0], begin.msg),
                              world.clock, rng, world.policy);
        REQUIRE(hub.ok());
        const auto msg4 = in_forward_down(world.relays[0], hub.value().msg);
        world.clock.advance(world.policy.delta_t);  // reply held back too long
        auto r = sn_complete_auth(world.sensors[0], begin.pending, msg4.value(), world.clock,
                                  world.policy);
        CHECK(r.error() == ProtoError::StaleTimestamp);
        CHECK(!world.sensors[0].session_key.has_value());
    }

    SUBCASE("any single flipped bit in m4 or m3 fails authentication") {
        auto begin = sn_begin_auth(world.sensors[0], world.clock, rng);
        world.clock.advance(1);
        auto hub = hn_process(world.hub, in_forward_up(world.relays[0], begin.msg),
                              world.clock, rng, world.policy);
        REQUIRE(hub.ok());
        const Message4 good = in_forward_down(world.relays[0], hub.value().msg).value();
        world.clock.advance(1);
        for (std::size_t bit : {0u, 1u, 63u, 100u, 159u}) {
            Message4 bad = good;
            bad.m4.flip_bit(bit);
            auto r = sn_complete_auth(world.sensors[0], begin.pending, bad, world.clock,
                                      world.policy);
            CHECK(r.error() == ProtoError::AuthFailed);

            bad = good;
            bad.m3.flip_bit(bit);  // corrupts the recovered nonce
            r = sn_complete_auth(world.sensors[0], begin.pending, bad, world.clock,
                                 world.policy);
            CHECK(r.error() == ProtoError::AuthFailed);
        }
        // the untouched reply still verifies and yields the hub's key
        auto good_key = sn_complete_auth(world.sensors[0], begin.pending, good, world.clock,
                                         world.policy);
        REQUIRE(good_key.ok());
        CHECK(good_key.value() == hub.value().key);
    }
}

TEST_CASE("failed attempts leave no trace: retry succeeds with fresh values") {
    World world = build_world(make_deployment(1, 1, 16));
    Rng rng(16);

    // first attempt dies at the sensor (tampered m4)
    auto begin = sn_begin_auth(world.sensors[0], world.clock, rng);
    world.clock.advance(1);
    auto hub = hn_process(world.hub, in_forward_up(world.relays[0], begin.msg), world.clock,
                          rng, world.policy);
    Message4 bad = in_forward_down(world.relays[0], hub.value().msg).value();
    bad.m4.flip_bit(7);
    world.clock.advance(1);
    CHECK(!sn_complete_auth(world.sensors[0], begin.pending, bad, world.clock, world.policy)
               .ok());

    // retry from scratch: fresh nonce, fresh timestamp, clean completion
    auto retry = sn_begin_auth(world.sensors[0], world.clock, rng);
    CHECK(retry.msg.m1 != begin.msg.m1);
    world.clock.advance(1);
    auto hub2 = hn_process(world.hub, in_forward_up(world.relays[0], retry.msg), world.clock,
                           rng, world.policy);
    REQUIRE(hub2.ok());
    world.clock.advance(1);
    auto key = sn_complete_auth(world.sensors[0], retry.pending,
                                in_forward_down(world.relays[0], hub2.value().msg).value(),
                                world.clock, world.policy);
    REQUIRE(key.ok());
    CHECK(key.value() == hub2.value().key);
}

TEST_CASE("hub long-term table entries are never mutated by protocol steps") {
    World world = build_world(make_deployment(3, 1, 17));
    Rng rng(17);
    const auto longterm_before = table_bytes(world.hub, /*include_session_keys=*/false);

    // a successful session, a stale abort, and a no-match abort
    honest_exchange(world, rng, 1);
    auto begin = sn_begin_auth(world.sensors[0], world.clock, rng);
    auto msg2 = in_forward_up(world.relays[0], begin.msg);
    world.clock.advance(world.policy.delta_t + 2);
    CHECK(!hn_process(world.hub, msg2, world.clock, rng, world.policy).ok());
    Message2 junk = msg2;
    junk.t_n = world.clock.now();
    junk.m1 = junk.m1 ^ world.sensors[0].a_n;
    CHECK(!hn_process(world.hub, junk, world.clock, rng, world.policy).ok());

    CHECK(table_bytes(world.hub, false) == longterm_before);
}

TEST_CASE("table scan: registered pair always matches, wrong pairs never do") {
    std::mt19937_64 gen(51);
    int wrong_accepts = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const BitString k_hn = random_bits(gen, 160);
        const BitString id_n = random_bits(gen, 160);
        const BitString k_n = random_bits(gen, 160);
        HubState hub = init_hub(k_hn);
        SensorCredentials creds = register_sensor(hub, id_n, k_n);

        SimClock clock(gen() % 1000);
        Rng rng(gen());
        const auto begin = sn_begin_auth(creds, clock, rng);

        const BitString peeled = hub_scan_peel(k_hn, begin.msg.t_n, begin.msg.m2);
        CHECK(hub_entry_matches(peeled, begin.msg.t_n, begin.msg.m1, hub.table[0].k_n,
                                hub.table[0].a_n));

        const BitString wrong_k = random_bits(gen, 160);
        const BitString wrong_a = random_bits(gen, 160);
        if (hub_entry_matches(peeled, begin.msg.t_n, begin.msg.m1, wrong_k, wrong_a)) {
            ++wrong_accepts;
        }
    }
    CHECK(wrong_accepts == 0);
}

TEST_CASE("table scan check is equivalent to rebuilding m2 from the candidate") {
    // Reference route: a sender holding the candidate pair would produce
    // m2' = ((k_hn ^ cand_k) || t) ^ (t || (m1 ^ cand_a)); accept iff m2' == m2.
    std::mt19937_64 gen(52);
    for (int trial = 0; trial < 2000; ++trial) {
        const BitString k_hn = random_bits(gen, 160);
        const BitString id_n = random_bits(gen, 160);
        const BitString k_n = random_bits(gen, 160);
        HubState hub = init_hub(k_hn);
        SensorCredentials creds = register_sensor(hub, id_n, k_n);
        SimClock clock(gen() % 100000);
        Rng rng(gen());
        const auto begin = sn_begin_auth(creds, clock, rng);
        const BitString t_bits = BitString::from_u32(begin.msg.t_n.value);
        const BitString peeled = hub_scan_peel(k_hn, begin.msg.t_n, begin.msg.m2);

        for (int cand = 0; cand < 8; ++cand) {
            const bool use_real = cand == 0;
            const BitString ck = use_real ? k_n : random_bits(gen, 160);
            const BitString ca = use_real ? creds.a_n : random_bits(gen, 160);
            const BitString rebuilt = concat(k_hn ^ ck, t_bits) ^
                                      concat(t_bits, begin.msg.m1 ^ ca);
            const bool reference = rebuilt == begin.msg.m2;
            const bool implementation =
                hub_entry_matches(peeled, begin.msg.t_n, begin.msg.m1, ck, ca);
            CHECK(reference == implementation);
            if (use_real) CHECK(implementation);
        }
    }
}
