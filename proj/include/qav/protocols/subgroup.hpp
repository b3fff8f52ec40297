#pragma once

#include <vector>

#include "qav/protocols/config.hpp"
#include "qav/qsim/gates.hpp"
#include "qav/qsim/state.hpp"

namespace qav::proto {

// Per-voter veto operations for the travel-qubit scheme. Voter i holds the
// two-element set {identity, ops[i]}; applying ops[i] means veto. The words
// act on the `travel` positions of the m-qubit resource, and are chosen so
// the final state matches the initial one exactly when no voter or every
// voter vetoed, and is orthogonal to it otherwise.
struct SubgroupAssignment {
    StateKind state_kind = StateKind::ghz;
    int m = 0;
    std::vector<int> travel;           // qubit positions inside the register
    std::vector<qsim::PauliWord> ops;  // one word per voter
};

// The m-qubit resource state for a kind (bell fixes m=2, cluster4 fixes m=4).
qsim::StateVector subgroup_state(StateKind kind, int m);

// Built-in tables for (n=3, bell), (n=3, ghz), (n=4, ghz), (n=4, cluster4);
// other combinations fall back to exhaustive search over Pauli words on the
// travel qubits. Throws ConfigError when no valid table exists (e.g. n=4 on
// a Bell resource). m_request = 0 picks the default width.
SubgroupAssignment canonical_assignment(int n, StateKind kind, int m_request);

// canonical_assignment with the ops dealt to voters in uniformly random order.
SubgroupAssignment assign_subgroups(int n, StateKind kind, int m_request, Rng& rng);

// Checks all invariants: words are non-identity, pairwise distinct up to
// phase, square to identity up to phase, their ordered product is identity up
// to phase, and every proper nonempty voter subset moves the state to an
// orthogonal one. Throws InternalError on violation.
void validate_assignment(const SubgroupAssignment& assignment, int n);

}  // namespace qav::proto
