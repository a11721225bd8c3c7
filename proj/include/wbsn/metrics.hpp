#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>

#include "wbsn/bitstring.hpp"
#include "wbsn/wire.hpp"

namespace wbsn {

/// Analytic cost constants: per-hash time on the reference class of
/// micro-controller and its active power draw. Configuration, not physics —
/// override to model other hardware.
struct EnergyModel {
    double hash_ms = 0.06;      // one 160-bit hash
    double active_mw = 118.8;   // active-mode power
};

struct RoleCost {
    std::uint64_t hash_count = 0;
    std::uint64_t xor_count = 0;
    std::uint64_t storage_bits = 0;
    double time_ms = 0.0;
    double energy_mj = 0.0;
};

/// Per-session cost report. bits_sent[k] is the total bits placed on hop k+1
/// (SN->IN, IN->HN, HN->IN, IN->SN) during the session, retransmissions and
/// injected frames included.
struct CostReport {
    RoleCost sn;
    RoleCost in;
    RoleCost hn;
    std::array<std::uint64_t, 4> bits_sent{};
};

// Time is linear in the hash count; xors are treated as free, matching the
// t_xor ~ 0 assumption the analytic model is built on.
RoleCost role_cost(const OpCounter& ops, std::uint64_t storage_bits,
                   const EnergyModel& model = {});

// Storage accounting. A sensor holds id, a, b and the session key; a relay
// only its 16-bit id; the hub 480 bits per sensor, 16 per relay, plus the
// master key.
std::uint64_t sn_storage_bits();
std::uint64_t in_storage_bits();
std::uint64_t hn_storage_bits(std::size_t n_sensors, std::size_t m_intermediates);

// Total bits transmitted per hop over a transcript (one transmission counts
// once, delivered or not).
std::array<std::uint64_t, 4> bandwidth_account(const Transcript& t);

CostReport collect(const OpCounter& sn_ops, const OpCounter& in_ops, const OpCounter& hn_ops,
                   const Transcript& transcript, std::size_t n_sensors,
                   std::size_t m_intermediates, const EnergyModel& model = {});

// Structured-text form with fixed field names, stable across runs so reports
// can be diffed against golden files.
void write_report(std::ostream& out, const CostReport& report);

}  // namespace wbsn
