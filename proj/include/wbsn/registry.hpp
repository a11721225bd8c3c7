#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wbsn/primitives.hpp"

namespace wbsn {

// Setup-phase state written by the system administrator. Registration runs in
// a secure environment before any protocol traffic; after that the hub table's
// (k_n, a_n) columns are never mutated, only per-entry session keys are.

/// Tuple burned into sensor memory: <id_n, a_n, b_n> plus the agreed key.
struct SensorCredentials {
    BitString id_n;
    BitString a_n;  // sha1(id_n || k_n)
    BitString b_n;  // k_hn ^ k_n ^ id_n
    std::optional<SessionKey> session_key;
};

struct HubEntry {
    BitString k_n;
    BitString a_n;
    std::optional<SessionKey> session_key;
    bool operator==(const HubEntry&) const = default;
};

struct HubState {
    BitString k_hn;                       // master key, never leaves the hub
    std::vector<BitString> intermediates; // registered 16-bit relay ids
    std::vector<HubEntry> table;          // insertion order; lookups scan linearly

    bool knows_intermediate(const BitString& id_in) const;
    bool operator==(const HubState&) const = default;
};

/// A relay stores nothing but its own short id.
struct IntermediateState {
    BitString id_in;
};

struct DuplicateSensor : std::runtime_error {
    DuplicateSensor() : std::runtime_error("sensor with identical a_n already registered") {}
};

struct DuplicateIntermediate : std::runtime_error {
    DuplicateIntermediate() : std::runtime_error("intermediate id already registered") {}
};

HubState init_hub(BitString k_hn);

// Computes the credential pair and adds (k_n, a_n) to the hub table.
// Throws DuplicateSensor if the resulting a_n is already present.
SensorCredentials register_sensor(HubState& hub, const BitString& id_n, const BitString& k_n);

// Throws DuplicateIntermediate on an id collision.
IntermediateState register_intermediate(HubState& hub, const BitString& id_in);

// Serialized hub table, for bit-identity checks across protocol runs.
std::vector<std::uint8_t> table_bytes(const HubState& hub, bool include_session_keys = true);

/// Reproducible deployment description: everything needed to rebuild the hub
/// and all node states from a fixture file.
struct Deployment {
    BitString k_hn;
    std::vector<std::pair<BitString, BitString>> sensors;  // (id_n, k_n)
    std::vector<BitString> intermediates;
};

// Draws the master key, sensor ids/keys, and relay ids from a seeded rng.
// Uniqueness is enforced by rejection.
Deployment make_deployment(std::size_t n_sensors, std::size_t m_intermediates,
                           std::uint64_t seed);

std::string deployment_to_json(const Deployment& d);
Deployment deployment_from_json(const std::string& text);  // throws on malformed input

void save_deployment(const Deployment& d, const std::string& path);
Deployment load_deployment(const std::string& path);

}  // namespace wbsn
