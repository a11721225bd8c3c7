#include "wbsn/simnet.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace wbsn {

World build_world(const Deployment& d, FreshnessPolicy policy) {
    World w;
    w.hub = init_hub(d.k_hn);
    for (const auto& [id_n, k_n] : d.sensors) {
        w.sensors.push_back(register_sensor(w.hub, id_n, k_n));
    }
    for (const auto& id_in : d.intermediates) {
        w.relays.push_back(register_intermediate(w.hub, id_in));
    }
    w.policy = policy;
    return w;
}

std::string_view step_name(Step s) {
    switch (s) {
        case Step::Step1: return "Step1";
        case Step::Step2: return "Step2";
        case Step::Step3: return "Step3";
        case Step::Step4: return "Step4";
        case Step::Step5: return "Step5";
    }
    return "?";
}

std::string SessionOutcome::describe() const {
    if (agreed()) return "AgreedKeys";
    if (aborted_at) {
        std::string reason(to_string(error.value_or(ProtoError::MessageLost)));
        return "AbortedAt(" + std::string(step_name(*aborted_at)) + ", " + reason + ")";
    }
    if (hub_accepted()) return "HubAccepted";
    return "Incomplete";
}

namespace {

enum class EvKind { Delivery, Inject };

struct Event {
    std::uint64_t at = 0;
    std::uint64_t seq = 0;  // ties processed in insertion order
    EvKind kind = EvKind::Delivery;
    Hop hop = Hop::SnToIn;
    std::vector<std::uint8_t> bytes;
    std::string note;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        return std::tie(a.at, a.seq) > std::tie(b.at, b.seq);
    }
};

void add_note(std::string& note, const std::string& what) {
    if (!note.empty()) note += ';';
    note += what;
}

bool matches(const FrameSel& sel, Hop hop, int occurrence) {
    return sel.hop == hop && sel.occurrence == occurrence;
}

class SessionEngine {
public:
    SessionEngine(World& world, const AdversaryScript& script, Rng& rng, SessionResult& res,
                  bool expect_completion)
        : world_(world),
          script_(script),
          rng_(rng),
          res_(res),
          expect_completion_(expect_completion) {}

    void start_session(std::size_t sensor_index) {
        sensor_ = &world_.sensors.at(sensor_index);
        auto begin = sn_begin_auth(*sensor_, world_.clock, rng_, &res_.sn_ops);
        pending_ = std::move(begin.pending);
        transmit(Hop::SnToIn, encode(begin.msg), "");
    }

    // Adversary injection: the frame appears on the hop at exactly `at`
    // (clamped to now), with no propagation delay of its own.
    void inject(Hop hop, std::vector<std::uint8_t> bytes, Timestamp at, std::string note) {
        queue_.push(Event{abs_time_for(at), seq_++, EvKind::Inject, hop, std::move(bytes),
                          std::move(note)});
    }

    void drain() {
        while (!queue_.empty()) {
            Event ev = queue_.top();
            queue_.pop();
            world_.clock.advance_to(ev.at);
            if (ev.kind == EvKind::Inject) {
                transmit(ev.hop, std::move(ev.bytes), std::move(ev.note), /*instant=*/true);
            } else {
                deliver(ev.hop, ev.bytes);
            }
        }
        if (!terminal_ && expect_completion_) {
            const Step failed = stall_ ? stall_->first : next_step();
            const ProtoError err = stall_ ? stall_->second : ProtoError::MessageLost;
            abort_at(failed, err);
        }
    }

private:
    const IntermediateState& relay() const { return world_.relays.at(world_.path_relay); }

    std::uint64_t abs_time_for(Timestamp at) const {
        const std::uint32_t now32 = world_.clock.now().value;
        if (at.value > now32) return world_.clock.ticks() + (at.value - now32);
        return world_.clock.ticks();
    }

    Step next_step() const {
        return static_cast<Step>(std::min(5, static_cast<int>(reached_) + 1));
    }

    void mark_reached(Step s) { reached_ = std::max(reached_, s); }

    void abort_at(Step step, ProtoError err) {
        if (terminal_) return;
        terminal_ = true;
        res_.outcome.aborted_at = step;
        res_.outcome.error = err;
    }

    // Places a frame on a hop: runs the adversary over it, records it, and
    // schedules delivery unless it was dropped.
    void transmit(Hop hop, std::vector<std::uint8_t> bytes, std::string note,
                  bool instant = false) {
        const int occurrence = hop_count_[static_cast<std::size_t>(hop)]++;
        bool dropped = false;
        std::uint32_t extra_delay = 0;
        for (const auto& action : script_) {
            if (const auto* obs = std::get_if<Observe>(&action)) {
                if (matches(obs->sel, hop, occurrence)) add_note(note, "observed");
            } else if (const auto* drop = std::get_if<Drop>(&action)) {
                if (matches(drop->sel, hop, occurrence)) {
                    dropped = true;
                    add_note(note, "dropped");
                }
            } else if (const auto* delay = std::get_if<Delay>(&action)) {
                if (matches(delay->sel, hop, occurrence)) {
                    extra_delay += delay->by;
                    add_note(note, "delayed+" + std::to_string(delay->by));
                }
            } else if (const auto* tamper = std::get_if<Tamper>(&action)) {
                if (matches(tamper->sel, hop, occurrence)) {
                    for (std::size_t bit : tamper->bits) {
                        if (bit >= bytes.size() * 8) {
                            throw std::invalid_argument("tamper bit position past frame end");
                        }
                        bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (7 - bit % 8));
                    }
                    add_note(note, "tampered");
                }
            }
        }
        res_.transcript.records.push_back(
            TranscriptRecord{world_.clock.now(), hop, bytes, note, !dropped});
        schedule_pending_replays();
        if (!dropped) {
            const std::uint64_t hop_delay = instant ? 0 : world_.policy.per_hop_delay;
            queue_.push(Event{world_.clock.ticks() + hop_delay + extra_delay, seq_++,
                              EvKind::Delivery, hop, std::move(bytes), {}});
        }
    }

    // A replay action can only be scheduled once the record it points at
    // exists; check after every transcript append.
    void schedule_pending_replays() {
        for (std::size_t i = 0; i < script_.size(); ++i) {
            const auto* rep = std::get_if<Replay>(&script_[i]);
            if (!rep || replay_done_.count(i)) continue;
            if (rep->recorded_index < res_.transcript.records.size()) {
                replay_done_.insert(i);
                const auto& rec = res_.transcript.records[rep->recorded_index];
                inject(rec.hop, rec.bytes, rep->at,
                       "replayed#" + std::to_string(rep->recorded_index));
            }
        }
    }

    void deliver(Hop hop, const std::vector<std::uint8_t>& bytes) {
        switch (hop) {
            case Hop::SnToIn: {
                auto msg = decode_message1(bytes);
                if (!msg) return;  // mangled frame, relay drops it
                mark_reached(Step::Step2);
                transmit(Hop::InToHn, encode(in_forward_up(relay(), msg.value())), "");
                return;
            }
            case Hop::InToHn: {
                auto msg = decode_message2(bytes);
                if (!msg) return;
                auto accepted = hn_process(world_.hub, msg.value(), world_.clock, rng_,
                                           world_.policy, &res_.hn_ops);
                if (!accepted) {
                    abort_at(Step::Step3, accepted.error());
                    return;
                }
                mark_reached(Step::Step3);
                if (!res_.outcome.hn_key) res_.outcome.hn_key = accepted.value().key;
                transmit(Hop::HnToIn, encode(accepted.value().msg), "");
                return;
            }
            case Hop::HnToIn: {
                auto msg = decode_message3(bytes);
                if (!msg) return;
                auto forwarded = in_forward_down(relay(), msg.value());
                if (!forwarded) {
                    // not ours: the relay drops it and the sensor starves
                    if (!stall_) stall_ = {Step::Step4, forwarded.error()};
                    return;
                }
                mark_reached(Step::Step4);
                transmit(Hop::InToSn, encode(std::move(forwarded).value()), "");
                return;
            }
            case Hop::InToSn: {
                auto msg = decode_message4(bytes);
                if (!msg) return;
                if (!pending_ || !sensor_) return;  // no session in flight
                auto key = sn_complete_auth(*sensor_, std::move(*pending_), msg.value(),
                                            world_.clock, world_.policy, &res_.sn_ops);
                pending_.reset();  // single use, success or failure
                if (!key) {
                    abort_at(Step::Step5, key.error());
                    return;
                }
                mark_reached(Step::Step5);
                if (!terminal_) {
                    res_.outcome.sn_key = std::move(key).value();
                    terminal_ = true;
                }
                return;
            }
        }
    }

    World& world_;
    const AdversaryScript& script_;
    Rng& rng_;
    SessionResult& res_;
    bool expect_completion_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t seq_ = 0;
    std::array<int, 4> hop_count_{};
    std::set<std::size_t> replay_done_;

    SensorCredentials* sensor_ = nullptr;
    std::optional<PendingSession> pending_;
    Step reached_ = Step::Step1;
    std::optional<std::pair<Step, ProtoError>> stall_;
    bool terminal_ = false;
};

}  // namespace

SessionResult run_session(World& world, const AdversaryScript& script, std::uint64_t seed,
                          std::size_t sensor_index) {
    SessionResult res;
    Rng rng(seed);
    // physical capture happens before any traffic: the adversary reads the
    // tuple as stored at that moment
    for (const auto& action : script) {
        if (const auto* cap = std::get_if<CaptureSensor>(&action)) {
            const auto& s = world.sensors.at(cap->sensor_index);
            res.captured.push_back(
                CapturedTuple{cap->sensor_index, s.id_n, s.a_n, s.b_n, s.session_key});
        }
    }
    SessionEngine engine(world, script, rng, res, /*expect_completion=*/true);
    engine.start_session(sensor_index);
    engine.drain();
    return res;
}

SessionResult replay_attack(World& world, const Transcript& recorded, Timestamp at,
                            std::uint64_t seed) {
    const TranscriptRecord* source = nullptr;
    for (const auto& rec : recorded.records) {
        if (rec.hop == Hop::InToHn && rec.delivered) {
            source = &rec;
            break;
        }
    }
    if (!source) {
        throw std::invalid_argument("replay_attack: transcript has no relay->hub frame");
    }
    SessionResult res;
    Rng rng(seed);
    static const AdversaryScript no_script;
    SessionEngine engine(world, no_script, rng, res, /*expect_completion=*/false);
    engine.inject(Hop::InToHn, source->bytes, at, "replayed");
    engine.drain();
    return res;
}

CaptureReport capture_analysis(World& world, std::size_t sensor_index, std::uint64_t seed) {
    const SensorCredentials& s = world.sensors.at(sensor_index);
    CaptureReport report;
    report.sensor_index = sensor_index;
    report.tuple = CapturedTuple{sensor_index, s.id_n, s.a_n, s.b_n, s.session_key};
    report.key_mix = s.b_n ^ s.id_n;

    const HubEntry* entry = nullptr;
    for (const auto& e : world.hub.table) {
        if (e.a_n == s.a_n) {
            entry = &e;
            break;
        }
    }
    if (!entry) throw std::logic_error("captured sensor has no hub entry");

    report.key_mix_is_khn_xor_kn = report.key_mix == (world.hub.k_hn ^ entry->k_n);
    report.hash_binds_credentials = sha1(concat(s.id_n, entry->k_n)) == s.a_n;

    // Everything the tuple's xor algebra can reach. Neither long-term key may
    // be in this span; only their mix is.
    std::vector<BitString> parts{s.id_n, s.a_n, s.b_n};
    if (s.session_key) parts.push_back(*s.session_key);
    bool master_hit = false;
    bool sensor_hit = false;
    for (std::size_t mask = 0; mask < (std::size_t{1} << parts.size()); ++mask) {
        BitString v(kKeyBits);
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (mask & (std::size_t{1} << i)) v = v ^ parts[i];
        }
        master_hit = master_hit || v == world.hub.k_hn;
        sensor_hit = sensor_hit || v == entry->k_n;
    }
    report.master_key_derivable = master_hit;
    report.sensor_key_derivable = sensor_hit;

    for (std::size_t i = 0; i < world.sensors.size(); ++i) {
        if (i == sensor_index) continue;
        SessionResult r = run_session(world, {}, seed + i, i);
        if (r.outcome.agreed()) report.surviving_sensors.push_back(i);
    }
    return report;
}

namespace {

FrameSel sel_from_json(const nlohmann::json& a) {
    FrameSel sel;
    sel.hop = hop_from_name(a.at("hop").get<std::string>());
    sel.occurrence = a.value("occurrence", 0);
    return sel;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Scenario sc;
    sc.deployment_path = j.at("deployment").get<std::string>();
    if (j.contains("policy")) {
        const auto& p = j.at("policy");
        if (p.contains("deltaT")) sc.policy.delta_t = p.at("deltaT").get<std::uint32_t>();
        if (p.contains("hopDelay")) {
            sc.policy.per_hop_delay = p.at("hopDelay").get<std::uint32_t>();
        }
    }
    sc.seed = j.value("seed", std::uint64_t{0});
    sc.sensor = j.value("sensor", std::size_t{0});
    for (const auto& a : j.value("script", nlohmann::json::array())) {
        const std::string kind = a.at("action").get<std::string>();
        if (kind == "observe") {
            sc.script.push_back(Observe{sel_from_json(a)});
        } else if (kind == "drop") {
            sc.script.push_back(Drop{sel_from_json(a)});
        } else if (kind == "delay") {
            sc.script.push_back(Delay{sel_from_json(a), a.at("by").get<std::uint32_t>()});
        } else if (kind == "tamper") {
            sc.script.push_back(
                Tamper{sel_from_json(a), a.at("bits").get<std::vector<std::size_t>>()});
        } else if (kind == "replay") {
            sc.script.push_back(Replay{a.at("record").get<std::size_t>(),
                                       Timestamp{a.at("at").get<std::uint32_t>()}});
        } else if (kind == "capture") {
            sc.script.push_back(CaptureSensor{a.at("sensor").get<std::size_t>()});
        } else {
            throw std::invalid_argument("unknown adversary action: " + kind);
        }
    }
    sc.transcript_path = j.value("transcript", "");
    sc.report_path = j.value("report", "");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read scenario file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scenario_from_json(text);
}

}  // namespace wbsn
