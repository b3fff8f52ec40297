#pragma once

#include <string>
#include <vector>

#include "qav/primitives/transport.hpp"

namespace qav::prim {

// Ways for two parties to end up with one shared bit string:
//   bb84_qkd:             prepare-and-measure key distribution with sifting.
//   shared_bell:          a dealer hands out |phi+> halves; both sides measure
//                         in the diagonal basis and read identical bits.
//   orthogonal_qka:       the initiator circulates Bell-pair halves, the peer
//                         dense-codes its contribution, and the initiator
//                         announces its own; the key is the XOR of both.
//   semiquantum_mediated: a dealer circulates |phi+> halves to parties that
//                         only measure-resend or reflect; both-measure rounds
//                         give key bits, both-reflect rounds act as the
//                         tamper check.
enum class KeyMethod { bb84_qkd, shared_bell, orthogonal_qka, semiquantum_mediated };

KeyMethod key_method_from_name(const std::string& name);
const char* key_method_name(KeyMethod method);

struct KeyParams {
    KeyMethod method = KeyMethod::bb84_qkd;
    int length = 8;  // bits delivered after confirmation
    DecoyPolicy decoys;
    double confirm_fraction = 0.1;  // extra bits revealed to confirm equality
    qsim::KrausChannel noise;
    TapPolicy tap;
};

struct KeyResult {
    bool aborted = false;
    std::vector<int> a_bits;
    std::vector<int> b_bits;
};

// Runs one key-establishment session between parties `a` and `b` (the dealer
// methods involve a third party labelled "CA"). On success both bit vectors
// have params.length entries; under noise they can differ, which the
// confirmation step catches only with probability.
KeyResult establish_key(World& world, proto::Transcript& log, const std::string& a,
                        const std::string& b, const KeyParams& params, Rng& rng);

}  // namespace qav::prim
