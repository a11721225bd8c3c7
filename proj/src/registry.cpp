#include "wbsn/registry.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace wbsn {

bool HubState::knows_intermediate(const BitString& id_in) const {
    return std::find(intermediates.begin(), intermediates.end(), id_in) != intermediates.end();
}

HubState init_hub(BitString k_hn) {
    HubState hub;
    hub.k_hn = std::move(k_hn);
    return hub;
}

SensorCredentials register_sensor(HubState& hub, const BitString& id_n, const BitString& k_n) {
    const BitString a_n = sha1(concat(id_n, k_n));
    for (const auto& entry : hub.table) {
        if (entry.a_n == a_n) throw DuplicateSensor();
    }
    const BitString b_n = hub.k_hn ^ k_n ^ id_n;
    hub.table.push_back(HubEntry{k_n, a_n, std::nullopt});
    return SensorCredentials{id_n, a_n, b_n, std::nullopt};
}

IntermediateState register_intermediate(HubState& hub, const BitString& id_in) {
    if (hub.knows_intermediate(id_in)) throw DuplicateIntermediate();
    hub.intermediates.push_back(id_in);
    return IntermediateState{id_in};
}

std::vector<std::uint8_t> table_bytes(const HubState& hub, bool include_session_keys) {
    std::vector<std::uint8_t> out;
    for (const auto& entry : hub.table) {
        out.insert(out.end(), entry.k_n.bytes().begin(), entry.k_n.bytes().end());
        out.insert(out.end(), entry.a_n.bytes().begin(), entry.a_n.bytes().end());
        if (include_session_keys) {
            out.push_back(entry.session_key.has_value() ? 1 : 0);
            if (entry.session_key) {
                out.insert(out.end(), entry.session_key->bytes().begin(),
                           entry.session_key->bytes().end());
            }
        }
    }
    return out;
}

Deployment make_deployment(std::size_t n_sensors, std::size_t m_intermediates,
                           std::uint64_t seed) {
    Rng rng(seed);
    Deployment d;
    d.k_hn = rng.next_bits(kKeyBits);

    HubState hub = init_hub(d.k_hn);  // scratch hub, used only to enforce uniqueness
    while (d.sensors.size() < n_sensors) {
        BitString id_n = rng.next_bits(kIdBits);
        BitString k_n = rng.next_bits(kKeyBits);
        try {
            register_sensor(hub, id_n, k_n);
        } catch (const DuplicateSensor&) {
            continue;
        }
        d.sensors.emplace_back(std::move(id_n), std::move(k_n));
    }
    while (d.intermediates.size() < m_intermediates) {
        BitString id_in = rng.next_bits(kRelayIdBits);
        if (std::find(d.intermediates.begin(), d.intermediates.end(), id_in) !=
            d.intermediates.end()) {
            continue;
        }
        d.intermediates.push_back(std::move(id_in));
    }
    return d;
}

std::string deployment_to_json(const Deployment& d) {
    nlohmann::ordered_json j;
    j["kHN"] = d.k_hn.hex();
    j["sensors"] = nlohmann::ordered_json::array();
    for (const auto& [id_n, k_n] : d.sensors) {
        j["sensors"].push_back({{"idN", id_n.hex()}, {"kN", k_n.hex()}});
    }
    j["intermediates"] = nlohmann::ordered_json::array();
    for (const auto& id : d.intermediates) {
        j["intermediates"].push_back(id.hex());
    }
    return j.dump(2) + "\n";
}

Deployment deployment_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Deployment d;
    d.k_hn = BitString::from_hex(j.at("kHN").get<std::string>());
    for (const auto& s : j.at("sensors")) {
        d.sensors.emplace_back(BitString::from_hex(s.at("idN").get<std::string>()),
                               BitString::from_hex(s.at("kN").get<std::string>()));
    }
    for (const auto& id : j.at("intermediates")) {
        d.intermediates.push_back(BitString::from_hex(id.get<std::string>()));
    }
    return d;
}

void save_deployment(const Deployment& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write deployment file: " + path);
    out << deployment_to_json(d);
}

Deployment load_deployment(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read deployment file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deployment_from_json(text);
}

}  // namespace wbsn
