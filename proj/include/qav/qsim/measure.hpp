#pragma once

#include <vector>

#include "qav/qsim/rng.hpp"
#include "qav/qsim/state.hpp"

namespace qav::qsim {

enum class Basis { computational, diagonal, bell, ghz };

// Born-rule measurement outcome. For k target qubits the outcome is a k-bit
// integer with targets[0] as the top bit. Labels per basis:
//   computational: bits are |0>/|1> results.
//   diagonal:      bit 0 means |+>, bit 1 means |->.
//   bell (k=2):    top bit = phase, low bit = parity, so
//                  0=|phi+>, 1=|psi+>, 2=|phi->, 3=|psi->.
//   ghz (k>=2):    top bit = phase; outcome 0 is (|0..0>+|1..1>)/sqrt(2) and
//                  outcome 2^(k-1) is its phase-flipped partner.
struct MeasureResult {
    uint64_t outcome = 0;
    double probability = 1.0;
};

// Measures `targets` of `psi` in `basis`, collapsing psi in place to the
// corresponding eigenstate (the post-state stays expressed in the original
// computational frame).
MeasureResult measure(StateVector& psi, Basis basis, const std::vector<int>& targets,
                      Rng& rng);

enum class OverlapLabel { same, orthogonal, partial };

struct Overlap {
    OverlapLabel label = OverlapLabel::partial;
    double magnitude2 = 0.0;  // |<a|b>|^2, insensitive to global phase
};

// Classifies |<a|b>|^2 against [0, 1] with tolerance `tol` on both ends.
Overlap overlap_label(const StateVector& a, const StateVector& b, double tol = 1e-9);

}  // namespace qav::qsim
