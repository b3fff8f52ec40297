#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qav/qsim/channel.hpp"
#include "qav/qsim/measure.hpp"
#include "qav/qsim/state.hpp"

namespace qav::prim {

// Stable handle to one qubit, valid across register merges.
struct Qubit {
    uint64_t id = ~uint64_t{0};
    bool valid() const { return id != ~uint64_t{0}; }
    bool operator==(const Qubit&) const = default;
};

// Owns all registers of a simulation run and addresses qubits by stable id,
// transparently tensoring registers together when a joint operation spans
// more than one. Parties and adversaries hold Qubit handles only.
class World {
  public:
    World() = default;

    // Adds `psi` as a new register; returns its qubits in register order.
    std::vector<Qubit> add_register(qsim::StateVector psi);
    Qubit add_qubit(qsim::StateVector one_qubit);

    int register_size(Qubit q) const;
    // Read-only view of the register currently containing q.
    const qsim::StateVector& register_state(Qubit q) const;
    // Position of q within its register.
    int index_of(Qubit q) const;

    void apply_1q(const qsim::Matrix2cd& u, Qubit q);
    // Joint unitary; merges registers of the targets first when needed.
    void apply_unitary(const qsim::MatrixXcd& u, const std::vector<Qubit>& targets);

    qsim::MeasureResult measure(qsim::Basis basis, const std::vector<Qubit>& targets,
                                Rng& rng);

    void apply_channel(const qsim::KrausChannel& ch, Qubit q, Rng& rng);

    // Appends a fresh one-qubit ancilla into the register holding `attach_to`
    // (used by the entangling channel attack).
    Qubit append_ancilla(const qsim::StateVector& one_qubit, Qubit attach_to);

    // Two-outcome measurement asking "are `qubits` in state `reference`?";
    // collapses onto |ref><ref| (x) I or its complement with Born weights.
    // `qubits` must be the leading positions of their register in order;
    // extra qubits appended later (e.g. adversary ancillas) may trail.
    bool project_onto(const qsim::StateVector& reference,
                      const std::vector<Qubit>& qubits, Rng& rng);

    size_t register_count() const { return regs_.size(); }

  private:
    struct Slot {
        int reg = -1;
        int idx = -1;
    };

    int reg_of(Qubit q) const;
    // Ensures all targets share one register; returns that register id.
    int merge_for(const std::vector<Qubit>& targets);
    std::vector<int> indices_in_reg(const std::vector<Qubit>& targets) const;

    std::vector<qsim::StateVector> regs_;
    std::vector<std::vector<uint64_t>> members_;  // register id -> qubit ids
    std::unordered_map<uint64_t, Slot> where_;
    uint64_t next_id_ = 0;
};

}  // namespace qav::prim
