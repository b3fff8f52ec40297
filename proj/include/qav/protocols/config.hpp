#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qav/adversary/attack.hpp"
#include "qav/primitives/keys.hpp"
#include "qav/protocols/transcript.hpp"
#include "qav/qsim/channel.hpp"

namespace qav::proto {

// Protocol families:
//   rkqav         iterative GHZ rounds with phase-gate encoding
//   wqav          masked-parity GHZ scheme with per-copy vetoer coins
//   qav1..qav5    pairwise-key parity schemes (differ in the key method;
//                 qav5 runs one-bit rounds iteratively)
//   qav6          ring-circulated Bell-pair half with phase-gate encoding
//   qav7          travel-qubit Pauli-word encoding, deterministic
enum class ProtocolId { rkqav, wqav, qav1, qav2, qav3, qav4, qav5, qav6, qav7 };

ProtocolId protocol_from_name(const std::string& name);
const char* protocol_name(ProtocolId id);

enum class StateKind { bell, ghz, cluster4 };
StateKind state_kind_from_name(const std::string& name);
const char* state_kind_name(StateKind kind);

struct QdsConfig {
    bool enabled = true;
    int length = 32;
    double threshold = 0.1;
};

struct ProtocolConfig {
    ProtocolId id = ProtocolId::qav2;
    int n = 4;          // voters
    int l = 10;         // key bits / copies / iteration cap, per protocol
    double delta0 = 1.0;  // sacrificial correlation-check copies per payload copy
    double delta1 = 1.0;  // decoy qubits per payload qubit on each hop
    double decoy_threshold = 0.0;
    double key_confirm_fraction = 0.1;
    std::optional<prim::KeyMethod> key_method;  // pairwise schemes; defaulted per id
    StateKind state_kind = StateKind::ghz;      // travel-encoding resource
    int m = 0;  // travel-encoding register width; 0 picks the table default
    qsim::ChannelKind noise_kind = qsim::ChannelKind::identity;
    double noise_eta = 0.0;
    adv::AttackSpec attack;
    QdsConfig qds;
    bool record_transcript = true;
    int dishonest_voter = -1;  // flips its vote every iteration when >= 0
    uint64_t seed = 0;
};

// Throws ConfigError with an actionable message on any bad combination.
void validate(const ProtocolConfig& cfg);

// The key method actually used: the explicit choice if set, else the
// protocol's native one (qav1 -> bb84-qkd, qav2/qav5 -> shared-bell,
// qav3 -> orthogonal-qka, qav4 -> semiquantum-mediated, wqav -> bb84-qkd).
prim::KeyMethod effective_key_method(const ProtocolConfig& cfg);

// 1 + floor(log2 n): the round bound of the iterative schemes.
int iteration_cap(int n);

struct VoteVector {
    std::vector<int> w;

    int n() const { return static_cast<int>(w.size()); }
    int k() const;
    std::string str() const;

    static VoteVector from_string(const std::string& bits);
    static VoteVector with_k(int n, int k, Rng& rng);  // random veto placement
};

// The reference result: 0 iff every vote is 0.
int veto_or(const VoteVector& votes);

struct RunOutcome {
    int result = 0;  // veto bit, or the announced mismatch bit for qav7
    bool conclusive = false;
    double confidence = 1.0;  // probability that `result` is correct
    int iterations_used = 0;
    bool aborted = false;
    std::string abort_reason;
    Transcript transcript{false};
};

}  // namespace qav::proto
