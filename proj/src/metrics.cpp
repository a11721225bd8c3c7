#include "wbsn/metrics.hpp"

#include <ostream>

#include "json.hpp"

namespace wbsn {

RoleCost role_cost(const OpCounter& ops, std::uint64_t storage_bits, const EnergyModel& model) {
    RoleCost cost;
    cost.hash_count = ops.hashes;
    cost.xor_count = ops.xors;
    cost.storage_bits = storage_bits;
    cost.time_ms = model.hash_ms * static_cast<double>(ops.hashes);
    cost.energy_mj = cost.time_ms * (model.active_mw / 1000.0);  // ms x W = mJ
    return cost;
}

std::uint64_t sn_storage_bits() {
    return 4 * kHashBits;  // id_n, a_n, b_n, session key
}

std::uint64_t in_storage_bits() { return kRelayIdBits; }

std::uint64_t hn_storage_bits(std::size_t n_sensors, std::size_t m_intermediates) {
    // per sensor: k_n + a_n + session key; per relay: its id; plus the master key
    return 480 * static_cast<std::uint64_t>(n_sensors) +
           16 * static_cast<std::uint64_t>(m_intermediates) + 160;
}

std::array<std::uint64_t, 4> bandwidth_account(const Transcript& t) {
    std::array<std::uint64_t, 4> bits{};
    for (const auto& rec : t.records) {
        bits[static_cast<std::size_t>(rec.hop)] += 8 * rec.bytes.size();
    }
    return bits;
}

CostReport collect(const OpCounter& sn_ops, const OpCounter& in_ops, const OpCounter& hn_ops,
                   const Transcript& transcript, std::size_t n_sensors,
                   std::size_t m_intermediates, const EnergyModel& model) {
    CostReport report;
    report.sn = role_cost(sn_ops, sn_storage_bits(), model);
    report.in = role_cost(in_ops, in_storage_bits(), model);
    report.hn = role_cost(hn_ops, hn_storage_bits(n_sensors, m_intermediates), model);
    report.bits_sent = bandwidth_account(transcript);
    return report;
}

namespace {

nlohmann::ordered_json role_json(const RoleCost& cost) {
    return {{"hashCount", cost.hash_count},
            {"xorCount", cost.xor_count},
            {"storageBits", cost.storage_bits},
            {"timeMs", cost.time_ms},
            {"energyMJ", cost.energy_mj}};
}

}  // namespace

void write_report(std::ostream& out, const CostReport& report) {
    nlohmann::ordered_json j;
    j["SN"] = role_json(report.sn);
    j["IN"] = role_json(report.in);
    j["HN"] = role_json(report.hn);
    j["bitsSent"] = {{"hop1", report.bits_sent[0]},
                     {"hop2", report.bits_sent[1]},
                     {"hop3", report.bits_sent[2]},
                     {"hop4", report.bits_sent[3]}};
    out << j.dump(2) << '\n';
}

}  // namespace wbsn
