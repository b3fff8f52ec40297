#include "qav/primitives/transport.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "qav/common/error.hpp"

namespace qav::prim {

namespace {

void shuffle_slots(std::vector<Qubit>& slots, Rng& rng) {
    for (size_t i = slots.size(); i > 1; --i) {
        size_t j = rng.uniform_below(i);
        std::swap(slots[i - 1], slots[j]);
    }
}

}  // namespace

TransmitResult transmit(World& world, proto::Transcript& log, const std::string& sender,
                        const std::string& receiver, const std::vector<Qubit>& payload,
                        const DecoyPolicy& decoys, const qsim::KrausChannel& noise,
                        const TapPolicy& tap, Rng& rng) {
    TransmitResult result;

    std::vector<Qubit> slots = payload;
    std::vector<std::pair<Qubit, int>> bb84_decoys;  // qubit, preparation index
    std::vector<std::array<Qubit, 2>> bell_decoys;

    if (decoys.ratio > 0.0 && !payload.empty()) {
        if (decoys.sub == DecoySub::bb84) {
            int count = static_cast<int>(std::ceil(decoys.ratio * payload.size()));
            for (int i = 0; i < count; ++i) {
                int idx = static_cast<int>(rng.uniform_below(4));
                Qubit q = world.add_qubit(qsim::StateVector::bb84(idx));
                bb84_decoys.emplace_back(q, idx);
                slots.push_back(q);
            }
        } else {
            int pairs =
                static_cast<int>(std::ceil(decoys.ratio * payload.size() / 2.0));
            for (int i = 0; i < pairs; ++i) {
                auto halves = world.add_register(qsim::StateVector::bell_phi_plus());
                bell_decoys.push_back({halves[0], halves[1]});
                slots.push_back(halves[0]);
                slots.push_back(halves[1]);
            }
        }
    }

    shuffle_slots(slots, rng);
    std::unordered_map<uint64_t, size_t> slot_of;
    if (log.enabled()) {
        for (size_t i = 0; i < slots.size(); ++i) slot_of[slots[i].id] = i;
        std::ostringstream msg;
        msg << "slots=" << slots.size() << " payload=" << payload.size()
            << " decoys=" << (slots.size() - payload.size());
        log.record(proto::Rec::qubits, sender, receiver, msg.str());
    }

    if (noise.kind != qsim::ChannelKind::identity || tap.tap != nullptr) {
        for (Qubit q : slots) {
            if (noise.kind != qsim::ChannelKind::identity)
                world.apply_channel(noise, q, rng);
            if (tap.tap != nullptr &&
                (tap.probability >= 1.0 || rng.bernoulli(tap.probability))) {
                tap.tap->on_qubit(world, q, rng);
            }
        }
    }

    if (log.enabled())
        log.record(proto::Rec::ack, receiver, sender,
                   "received=" + std::to_string(slots.size()));

    int units = 0;
    int errors = 0;
    if (!bb84_decoys.empty()) {
        if (log.enabled()) {
            std::ostringstream reveal;
            reveal << "bb84";
            for (const auto& [q, idx] : bb84_decoys)
                reveal << ' ' << slot_of.at(q.id) << ':' << idx;
            log.record(proto::Rec::reveal, sender, receiver, reveal.str());
        }
        for (const auto& [q, idx] : bb84_decoys) {
            auto basis =
                (idx >> 1) ? qsim::Basis::diagonal : qsim::Basis::computational;
            auto r = world.measure(basis, {q}, rng);
            ++units;
            if (static_cast<int>(r.outcome) != (idx & 1)) ++errors;
        }
    }
    if (!bell_decoys.empty()) {
        if (log.enabled()) {
            std::ostringstream reveal;
            reveal << "bell-pairs";
            for (const auto& pair : bell_decoys)
                reveal << ' ' << slot_of.at(pair[0].id) << '+'
                       << slot_of.at(pair[1].id);
            log.record(proto::Rec::reveal, sender, receiver, reveal.str());
        }
        for (const auto& pair : bell_decoys) {
            auto r = world.measure(qsim::Basis::bell, {pair[0], pair[1]}, rng);
            ++units;
            if (r.outcome != 0) ++errors;  // anything but |phi+> flags tampering
        }
    }

    result.decoy_units = units;
    result.decoy_errors = errors;
    result.error_rate = units > 0 ? static_cast<double>(errors) / units : 0.0;
    bool abort = units > 0 && result.error_rate > decoys.threshold;
    if (log.enabled()) {
        std::ostringstream verdict;
        verdict << "units=" << units << " errors=" << errors
                << (abort ? " abort" : " ok");
        log.record(proto::Rec::decoy_verdict, receiver, sender, verdict.str());
    }
    if (abort) {
        result.aborted = true;
        log.record(proto::Rec::abort_event, receiver, "all",
                   "decoy check failed on link " + sender + "->" + receiver);
    }
    return result;
}

}  // namespace qav::prim
