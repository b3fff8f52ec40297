#include "qav/protocols/config.hpp"

#include "qav/common/error.hpp"

namespace qav::proto {

ProtocolId protocol_from_name(const std::string& name) {
    if (name == "rkqav") return ProtocolId::rkqav;
    if (name == "wqav") return ProtocolId::wqav;
    if (name == "qav1") return ProtocolId::qav1;
    if (name == "qav2") return ProtocolId::qav2;
    if (name == "qav3") return ProtocolId::qav3;
    if (name == "qav4") return ProtocolId::qav4;
    if (name == "qav5") return ProtocolId::qav5;
    if (name == "qav6") return ProtocolId::qav6;
    if (name == "qav7") return ProtocolId::qav7;
    throw ConfigError("unknown protocol: " + name);
}

const char* protocol_name(ProtocolId id) {
    switch (id) {
        case ProtocolId::rkqav: return "rkqav";
        case ProtocolId::wqav: return "wqav";
        case ProtocolId::qav1: return "qav1";
        case ProtocolId::qav2: return "qav2";
        case ProtocolId::qav3: return "qav3";
        case ProtocolId::qav4: return "qav4";
        case ProtocolId::qav5: return "qav5";
        case ProtocolId::qav6: return "qav6";
        case ProtocolId::qav7: return "qav7";
    }
    throw InternalError("unhandled protocol id");
}

StateKind state_kind_from_name(const std::string& name) {
    if (name == "bell") return StateKind::bell;
    if (name == "ghz") return StateKind::ghz;
    if (name == "cluster4" || name == "cluster") return StateKind::cluster4;
    throw ConfigError("unknown state kind: " + name);
}

const char* state_kind_name(StateKind kind) {
    switch (kind) {
        case StateKind::bell: return "bell";
        case StateKind::ghz: return "ghz";
        case StateKind::cluster4: return "cluster4";
    }
    throw InternalError("unhandled state kind");
}

int iteration_cap(int n) {
    if (n < 1) throw ConfigError("voter count must be at least 1");
    int cap = 1;
    while ((1 << cap) <= n) ++cap;  // cap = 1 + floor(log2 n)
    return cap;
}

prim::KeyMethod effective_key_method(const ProtocolConfig& cfg) {
    if (cfg.key_method) return *cfg.key_method;
    switch (cfg.id) {
        case ProtocolId::wqav:
        case ProtocolId::qav1: return prim::KeyMethod::bb84_qkd;
        case ProtocolId::qav2:
        case ProtocolId::qav5: return prim::KeyMethod::shared_bell;
        case ProtocolId::qav3: return prim::KeyMethod::orthogonal_qka;
        case ProtocolId::qav4: return prim::KeyMethod::semiquantum_mediated;
        default:
            throw ConfigError(std::string("protocol ") + protocol_name(cfg.id) +
                              " does not take a key method");
    }
}

void validate(const ProtocolConfig& cfg) {
    if (cfg.n < 2) throw ConfigError("need at least 2 voters");
    if (cfg.l < 1) throw ConfigError("l must be at least 1");
    if (cfg.delta0 < 0.0 || cfg.delta1 < 0.0)
        throw ConfigError("decoy ratios must be nonnegative");
    if (cfg.decoy_threshold < 0.0 || cfg.decoy_threshold > 1.0)
        throw ConfigError("decoy threshold must lie in [0,1]");
    if (cfg.key_confirm_fraction < 0.0 || cfg.key_confirm_fraction >= 1.0)
        throw ConfigError("key confirm fraction must lie in [0,1)");
    if (cfg.noise_eta < 0.0 || cfg.noise_eta > 1.0)
        throw ConfigError("noise eta must lie in [0,1]");
    if (cfg.attack.beta2 < 0.0 || cfg.attack.beta2 > 1.0)
        throw ConfigError("attack beta2 must lie in [0,1]");
    if (cfg.attack.tap_probability < 0.0 || cfg.attack.tap_probability > 1.0)
        throw ConfigError("tap probability must lie in [0,1]");
    if (cfg.qds.length < 1) throw ConfigError("signature length must be positive");
    if (cfg.qds.threshold < 0.0 || cfg.qds.threshold >= 1.0)
        throw ConfigError("signature threshold must lie in [0,1)");
    if (cfg.dishonest_voter >= cfg.n)
        throw ConfigError("dishonest voter index out of range");
    if (cfg.id == ProtocolId::rkqav && cfg.l < iteration_cap(cfg.n))
        throw ConfigError("iterative rounds need l >= 1 + floor(log2 n) copies");
    if (cfg.id == ProtocolId::qav7) {
        if (cfg.m != 0 && cfg.m < cfg.n - 1)
            throw ConfigError("register width m must be at least n-1");
        if (cfg.state_kind == StateKind::bell && cfg.n > 3)
            throw ConfigError("bell resource supports at most 3 voters (m = 2 < n-1)");
        if (cfg.state_kind == StateKind::bell && cfg.m != 0 && cfg.m != 2)
            throw ConfigError("bell resource fixes m = 2");
        if (cfg.state_kind == StateKind::cluster4 && cfg.m != 0 && cfg.m != 4)
            throw ConfigError("cluster resource fixes m = 4");
    }
    if (cfg.key_method &&
        !(cfg.id == ProtocolId::wqav ||
          (cfg.id >= ProtocolId::qav1 && cfg.id <= ProtocolId::qav5)))
        throw ConfigError(std::string("protocol ") + protocol_name(cfg.id) +
                          " does not take a key method");
}

int VoteVector::k() const {
    int total = 0;
    for (int bit : w) total += bit;
    return total;
}

std::string VoteVector::str() const {
    std::string s;
    s.reserve(w.size());
    for (int bit : w) s.push_back(bit ? '1' : '0');
    return s;
}

VoteVector VoteVector::from_string(const std::string& bits) {
    VoteVector votes;
    votes.w.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1')
            throw ConfigError("vote string must contain only 0 and 1");
        votes.w.push_back(c - '0');
    }
    if (votes.w.empty()) throw ConfigError("vote string must not be empty");
    return votes;
}

VoteVector VoteVector::with_k(int n, int k, Rng& rng) {
    if (n < 1) throw ConfigError("voter count must be at least 1");
    if (k < 0 || k > n) throw ConfigError("veto count must lie in [0,n]");
    VoteVector votes;
    votes.w.assign(n, 0);
    // Reservoir-free sampling: place k vetoes among the remaining slots.
    int left = k;
    for (int i = 0; i < n; ++i) {
        int remaining = n - i;
        if (left > 0 && rng.uniform_below(remaining) < static_cast<uint64_t>(left)) {
            votes.w[i] = 1;
            --left;
        }
    }
    return votes;
}

int veto_or(const VoteVector& votes) {
    if (votes.n() < 1) throw ConfigError("vote vector must not be empty");
    return votes.k() > 0 ? 1 : 0;
}

}  // namespace qav::proto
