#pragma once

#include <string>
#include <vector>

#include "qav/primitives/transport.hpp"

namespace qav::prim {

// Elimination signature: the signer sends BB84-encoded qubits, the verifier
// measures each one in a random basis and rules out the state that this
// outcome could never have produced. An honest signer's later reveal is never
// ruled out; a forger guessing preparations collides with a ruled-out state
// in about a quarter of positions.
struct QdsParams {
    int length = 32;
    double threshold = 0.1;  // accept while mismatch fraction <= threshold
};

struct QdsSignature {
    std::vector<int> indices;  // signer-secret BB84 preparation indices
};

struct QdsElimination {
    std::vector<int> eliminated;  // BB84 index ruled out at each position
};

// Signer side: prepares `length` BB84 qubits in `world`, appends them to
// `qubits`, and returns the secret preparation record.
QdsSignature qds_sign(World& world, std::vector<Qubit>& qubits, const QdsParams& params,
                      Rng& rng);

// Verifier side: measures every signature qubit in a random basis and records
// the preparation each outcome rules out.
QdsElimination qds_receive(World& world, const std::vector<Qubit>& qubits, Rng& rng);

// Fraction of positions whose claimed preparation was ruled out.
double qds_mismatch(const QdsElimination& elim, const std::vector<int>& claim);

bool qds_accept(const QdsParams& params, double mismatch);

// Full signer-to-verifier round for one party: sign, hand over, eliminate,
// reveal, accept. Records qds entries in the transcript.
bool qds_round(World& world, proto::Transcript& log, const std::string& signer,
               const std::string& verifier, const QdsParams& params, Rng& rng);

}  // namespace qav::prim
