#include "qav/protocols/subgroup.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qav/common/error.hpp"

namespace qav::proto {

namespace {

using qsim::PauliLetter;
using qsim::PauliWord;

PauliWord word_from(const std::vector<std::string>& symbols) {
    return qsim::build_pauli_word(symbols);
}

// |<psi| W on travel |psi>| for the full m-qubit resource.
double overlap_magnitude(const qsim::StateVector& psi, const PauliWord& word,
                         const std::vector<int>& travel) {
    qsim::StateVector moved = psi;
    moved.apply_unitary(word.to_unitary(), travel);
    return std::abs(psi.inner_product(moved));
}

// True when applying the ops of every proper nonempty voter subset moves the
// resource to an orthogonal state while the full set restores it.
bool subsets_behave(const qsim::StateVector& psi, const std::vector<PauliWord>& ops,
                    const std::vector<int>& travel) {
    const int n = static_cast<int>(ops.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
        PauliWord prod;
        prod.letters.assign(travel.size(), PauliLetter::I);
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) prod = prod.times(ops[i]);
        double mag = overlap_magnitude(psi, prod, travel);
        bool full = mask == (1 << n) - 1;
        if (full && std::abs(mag - 1.0) > 1e-9) return false;
        if (!full && mag > 1e-9) return false;
    }
    return true;
}

std::vector<PauliLetter> letters_of(int code, int t) {
    std::vector<PauliLetter> letters(t);
    for (int pos = t - 1; pos >= 0; --pos) {
        letters[pos] = static_cast<PauliLetter>(code & 3);
        code >>= 2;
    }
    return letters;
}

// Backtracking search for n distinct non-identity words on t qubits whose
// letterwise product is the identity and whose subset action passes
// subsets_behave. Words are tried in ascending code order; phases are left
// at +1 since subset-overlap magnitudes ignore global phase.
bool search_words(const qsim::StateVector& psi, const std::vector<int>& travel, int n,
                  int t, std::vector<PauliWord>& out) {
    const int classes = (1 << (2 * t));  // 4^t letter strings, code 0 = identity
    std::vector<int> pick;
    std::vector<PauliWord> words;

    std::function<bool(int, PauliWord)> recurse = [&](int depth,
                                                      PauliWord running) -> bool {
        if (depth == n) {
            if (!running.is_identity_up_to_phase()) return false;
            if (!subsets_behave(psi, words, travel)) return false;
            out = words;
            return true;
        }
        int start = pick.empty() ? 1 : pick.back() + 1;
        for (int code = start; code < classes; ++code) {
            PauliWord w;
            w.letters = letters_of(code, t);
            pick.push_back(code);
            words.push_back(w);
            if (recurse(depth + 1, running.times(w))) return true;
            words.pop_back();
            pick.pop_back();
        }
        return false;
    };

    PauliWord identity;
    identity.letters.assign(t, PauliLetter::I);
    return recurse(0, identity);
}

struct BuiltinRow {
    int n;
    StateKind kind;
    int m;
    std::vector<int> travel;
    std::vector<std::vector<std::string>> ops;
};

const std::vector<BuiltinRow>& builtin_rows() {
    static const std::vector<BuiltinRow> rows = {
        {3, StateKind::bell, 2, {1}, {{"X"}, {"iY"}, {"Z"}}},
        {3, StateKind::ghz, 3, {2}, {{"X"}, {"iY"}, {"Z"}}},
        {4, StateKind::ghz, 3, {1, 2},
         {{"X", "I"}, {"iX", "X"}, {"iY", "X"}, {"iY", "I"}}},
        {4, StateKind::cluster4, 4, {2, 3},
         {{"X", "iY"}, {"X", "Z"}, {"iY", "Z"}, {"iY", "iY"}}},
    };
    return rows;
}

}  // namespace

qsim::StateVector subgroup_state(StateKind kind, int m) {
    switch (kind) {
        case StateKind::bell:
            if (m != 2) throw ConfigError("bell resource fixes m = 2");
            return qsim::StateVector::bell_phi_plus();
        case StateKind::ghz:
            if (m < 2) throw ConfigError("ghz resource needs m >= 2");
            return qsim::StateVector::ghz(m);
        case StateKind::cluster4:
            if (m != 4) throw ConfigError("cluster resource fixes m = 4");
            return qsim::StateVector::cluster4();
    }
    throw InternalError("unhandled state kind");
}

SubgroupAssignment canonical_assignment(int n, StateKind kind, int m_request) {
    SubgroupAssignment assignment;
    assignment.state_kind = kind;

    const BuiltinRow* table = nullptr;
    for (const auto& row : builtin_rows()) {
        if (row.n == n && row.kind == kind && (m_request == 0 || m_request == row.m)) {
            table = &row;
            break;
        }
    }
    if (table != nullptr) {
        assignment.m = table->m;
        assignment.travel = table->travel;
        for (const auto& symbols : table->ops)
            assignment.ops.push_back(word_from(symbols));
    } else {
        int m = m_request;
        if (m == 0) {
            switch (kind) {
                case StateKind::bell: m = 2; break;
                case StateKind::cluster4: m = 4; break;
                case StateKind::ghz: m = std::max(2, n - 1); break;
            }
        }
        if (m < n - 1)
            throw ConfigError("register width m must be at least n-1");
        qsim::StateVector psi = subgroup_state(kind, m);
        bool found = false;
        for (int t = 1; t < m && !found; ++t) {
            std::vector<int> travel(t);
            for (int i = 0; i < t; ++i) travel[i] = m - t + i;
            std::vector<PauliWord> ops;
            if (search_words(psi, travel, n, t, ops)) {
                assignment.m = m;
                assignment.travel = travel;
                assignment.ops = std::move(ops);
                found = true;
            }
        }
        if (!found)
            throw ConfigError(std::string("no valid operation table for n=") +
                              std::to_string(n) + " on a " + state_kind_name(kind) +
                              " resource");
    }
    validate_assignment(assignment, n);
    return assignment;
}

SubgroupAssignment assign_subgroups(int n, StateKind kind, int m_request, Rng& rng) {
    SubgroupAssignment assignment = canonical_assignment(n, kind, m_request);
    for (size_t i = assignment.ops.size(); i > 1; --i)
        std::swap(assignment.ops[i - 1], assignment.ops[rng.uniform_below(i)]);
    return assignment;
}

void validate_assignment(const SubgroupAssignment& assignment, int n) {
    QAV_CHECK(static_cast<int>(assignment.ops.size()) == n,
              "one operation per voter required");
    QAV_CHECK(!assignment.travel.empty() &&
                  static_cast<int>(assignment.travel.size()) < assignment.m,
              "travel set must be nonempty and smaller than the register");
    for (const PauliWord& op : assignment.ops) {
        QAV_CHECK(op.arity() == static_cast<int>(assignment.travel.size()),
                  "operation arity must match the travel set");
        QAV_CHECK(!op.is_identity_up_to_phase(), "veto operation must act");
        QAV_CHECK(op.times(op).is_identity_up_to_phase(),
                  "veto operation must be an involution up to phase");
    }
    for (size_t i = 0; i < assignment.ops.size(); ++i)
        for (size_t j = i + 1; j < assignment.ops.size(); ++j)
            QAV_CHECK(!assignment.ops[i].same_up_to_phase(assignment.ops[j]),
                      "veto operations must be pairwise distinct");
    PauliWord prod;
    prod.letters.assign(assignment.travel.size(), PauliLetter::I);
    for (const PauliWord& op : assignment.ops) prod = prod.times(op);
    QAV_CHECK(prod.is_identity_up_to_phase(),
              "full product must be identity up to phase");
    qsim::StateVector psi = subgroup_state(assignment.state_kind, assignment.m);
    QAV_CHECK(subsets_behave(psi, assignment.ops, assignment.travel),
              "subset action must separate proper subsets from all-or-none");
}

}  // namespace qav::proto
