#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wbsn/metrics.hpp"
#include "wbsn/nodes.hpp"

namespace wbsn {

/// Deployed two-tier network: one hub, registered relays and sensors, a
/// shared simulated clock. One owner per world; independent worlds may run in
/// parallel.
struct World {
    HubState hub;
    std::vector<IntermediateState> relays;
    std::vector<SensorCredentials> sensors;
    FreshnessPolicy policy;
    SimClock clock;
    std::size_t path_relay = 0;  // relay on the SN<->HN path
};

World build_world(const Deployment& d, FreshnessPolicy policy = {});

// --- adversary -------------------------------------------------------------
//
// The adversary owns the channel: it sees every frame, and may remove, hold
// back, corrupt, or re-inject them, and may rip open a sensor. It never sees
// hub state or any long-term key; the script surface below is all it gets.

/// Selects the k-th frame placed on a hop during the run (k counts every
/// transmission on that hop, injected ones included).
struct FrameSel {
    Hop hop;
    int occurrence = 0;
};

struct Observe {
    FrameSel sel;
};
struct Drop {
    FrameSel sel;
};
struct Delay {
    FrameSel sel;
    std::uint32_t by = 0;  // extra units on top of the hop delay
};
struct Tamper {
    FrameSel sel;
    std::vector<std::size_t> bits;  // positions to flip, 0 = MSB of the frame
};
struct Replay {
    std::size_t recorded_index = 0;  // index into the run's own transcript
    Timestamp at;                    // injection time (clamped to now if past)
};
struct CaptureSensor {
    std::size_t sensor_index = 0;
};

using AdversaryAction = std::variant<Observe, Drop, Delay, Tamper, Replay, CaptureSensor>;
using AdversaryScript = std::vector<AdversaryAction>;

/// What a physical capture yields: the sensor's stored tuple, nothing more.
struct CapturedTuple {
    std::size_t sensor_index = 0;
    BitString id_n;
    BitString a_n;
    BitString b_n;
    std::optional<SessionKey> session_key;
};

// --- session runs ------------------------------------------------------------

enum class Step : int { Step1 = 1, Step2, Step3, Step4, Step5 };
std::string_view step_name(Step s);

struct SessionOutcome {
    std::optional<SessionKey> sn_key;
    std::optional<SessionKey> hn_key;
    std::optional<Step> aborted_at;
    std::optional<ProtoError> error;

    bool agreed() const { return !aborted_at && sn_key && hn_key; }
    // A re-injected frame the hub processed without a live sensor session.
    bool hub_accepted() const { return !aborted_at && hn_key.has_value(); }
    std::string describe() const;
};

struct SessionResult {
    SessionOutcome outcome;
    Transcript transcript;
    OpCounter sn_ops;
    OpCounter in_ops;
    OpCounter hn_ops;
    std::vector<CapturedTuple> captured;
};

// One authentication attempt by the chosen sensor, run to quiescence through
// the event queue under the given script. Identical (world state, script,
// seed) gives identical outcome and transcript, byte for byte.
SessionResult run_session(World& world, const AdversaryScript& script, std::uint64_t seed,
                          std::size_t sensor_index = 0);

// Re-injects the relay->hub frame of a previously recorded session at the
// given time. The clock cannot rewind: injection times before the world's
// current time are clamped to now (use a freshly built world to replay into
// the past of a recording).
SessionResult replay_attack(World& world, const Transcript& recorded, Timestamp at,
                            std::uint64_t seed = 0);

/// Outcome of tearing open one sensor: what leaked, what provably did not,
/// and whether the rest of the deployment still authenticates.
struct CaptureReport {
    std::size_t sensor_index = 0;
    CapturedTuple tuple;
    BitString key_mix;               // b_n ^ id_n — the only key material exposed
    bool key_mix_is_khn_xor_kn = false;
    bool master_key_derivable = false;  // k_hn found in the xor span of the tuple
    bool sensor_key_derivable = false;  // k_n found in the xor span of the tuple
    bool hash_binds_credentials = false;  // a_n == sha1(id_n || k_n) once k_n is supplied
    std::vector<std::size_t> surviving_sensors;
};

CaptureReport capture_analysis(World& world, std::size_t sensor_index,
                               std::uint64_t seed = 1);

// --- scenario files ----------------------------------------------------------

/// One reproducible run: deployment fixture, policy, seed, script, outputs.
struct Scenario {
    std::string deployment_path;
    FreshnessPolicy policy;
    std::uint64_t seed = 0;
    std::size_t sensor = 0;
    AdversaryScript script;
    std::string transcript_path;  // empty = do not write
    std::string report_path;      // empty = do not write
};

Scenario scenario_from_json(const std::string& text);  // throws on malformed input
Scenario load_scenario(const std::string& path);

}  // namespace wbsn
