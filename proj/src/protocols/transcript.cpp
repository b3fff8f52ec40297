#include "qav/protocols/transcript.hpp"

#include <sstream>

#include "qav/common/error.hpp"

namespace qav::proto {

const char* rec_name(Rec kind) {
    switch (kind) {
        case Rec::config: return "config";
        case Rec::votes: return "votes";
        case Rec::qds: return "qds";
        case Rec::qubits: return "qubits";
        case Rec::ack: return "ack";
        case Rec::reveal: return "reveal";
        case Rec::decoy_verdict: return "decoy-verdict";
        case Rec::basis: return "basis";
        case Rec::key_confirm: return "key-confirm";
        case Rec::vote_encode: return "vote-encode";
        case Rec::broadcast: return "broadcast";
        case Rec::announce: return "announce";
        case Rec::measure: return "measure";
        case Rec::verdict: return "verdict";
        case Rec::abort_event: return "abort";
        case Rec::note: return "note";
    }
    throw InternalError("unknown record kind");
}

void Transcript::record(Rec kind, std::string sender, std::string receiver,
                        std::string payload) {
    if (!enabled_) return;
    records_.push_back({kind, std::move(sender), std::move(receiver), std::move(payload)});
}

std::string Transcript::export_lines() const {
    std::ostringstream out;
    for (size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        out << i << '\t' << r.sender << '\t' << r.receiver << '\t' << rec_name(r.kind)
            << '\t' << payload_digest(r.payload) << '\n';
    }
    return out.str();
}

long long Transcript::first_index(Rec kind) const {
    for (size_t i = 0; i < records_.size(); ++i)
        if (records_[i].kind == kind) return static_cast<long long>(i);
    return -1;
}

long long Transcript::last_index(Rec kind) const {
    for (size_t i = records_.size(); i-- > 0;)
        if (records_[i].kind == kind) return static_cast<long long>(i);
    return -1;
}

long long Transcript::count(Rec kind) const {
    long long c = 0;
    for (const auto& r : records_)
        if (r.kind == kind) ++c;
    return c;
}

std::string payload_digest(const std::string& payload) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace qav::proto
