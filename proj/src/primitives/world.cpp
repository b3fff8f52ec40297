#include "qav/primitives/world.hpp"

#include <algorithm>
#include <cmath>

#include "qav/common/error.hpp"

namespace qav::prim {

std::vector<Qubit> World::add_register(qsim::StateVector psi) {
    const int n = psi.num_qubits();
    const int reg = static_cast<int>(regs_.size());
    regs_.push_back(std::move(psi));
    members_.emplace_back();
    std::vector<Qubit> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const uint64_t id = next_id_++;
        members_[reg].push_back(id);
        where_[id] = {reg, i};
        out.push_back({id});
    }
    return out;
}

Qubit World::add_qubit(qsim::StateVector one_qubit) {
    QAV_CHECK(one_qubit.num_qubits() == 1, "add_qubit expects a single qubit");
    return add_register(std::move(one_qubit))[0];
}

int World::reg_of(Qubit q) const {
    auto it = where_.find(q.id);
    QAV_CHECK(it != where_.end(), "unknown qubit handle");
    return it->second.reg;
}

int World::register_size(Qubit q) const { return regs_[reg_of(q)].num_qubits(); }

const qsim::StateVector& World::register_state(Qubit q) const { return regs_[reg_of(q)]; }

int World::index_of(Qubit q) const { return where_.at(q.id).idx; }

void World::apply_1q(const qsim::Matrix2cd& u, Qubit q) {
    const Slot s = where_.at(q.id);
    regs_[s.reg].apply_1q(u, s.idx);
}

int World::merge_for(const std::vector<Qubit>& targets) {
    QAV_CHECK(!targets.empty(), "no target qubits");
    std::vector<int> regs;
    for (Qubit q : targets) {
        const int r = reg_of(q);
        if (std::find(regs.begin(), regs.end(), r) == regs.end()) regs.push_back(r);
    }
    int host = regs[0];
    for (size_t i = 1; i < regs.size(); ++i) {
        const int other = regs[i];
        QAV_CHECK(regs_[host].num_qubits() + regs_[other].num_qubits() <= qsim::kHardMaxQubits,
                  "register merge would exceed the qubit cap");
        qsim::StateVector merged = qsim::StateVector::tensor(regs_[host], regs_[other]);
        const int offset = regs_[host].num_qubits();
        regs_[host] = std::move(merged);
        for (uint64_t id : members_[other]) {
            Slot& s = where_[id];
            s.reg = host;
            s.idx += offset;
            members_[host].push_back(id);
        }
        members_[other].clear();
        regs_[other] = qsim::StateVector(1);  // husk; no handles point here
    }
    return host;
}

std::vector<int> World::indices_in_reg(const std::vector<Qubit>& targets) const {
    std::vector<int> idx;
    idx.reserve(targets.size());
    for (Qubit q : targets) idx.push_back(where_.at(q.id).idx);
    return idx;
}

void World::apply_unitary(const qsim::MatrixXcd& u, const std::vector<Qubit>& targets) {
    const int reg = merge_for(targets);
    regs_[reg].apply_unitary(u, indices_in_reg(targets));
}

qsim::MeasureResult World::measure(qsim::Basis basis, const std::vector<Qubit>& targets,
                                   Rng& rng) {
    const int reg = merge_for(targets);
    return qsim::measure(regs_[reg], basis, indices_in_reg(targets), rng);
}

void World::apply_channel(const qsim::KrausChannel& ch, Qubit q, Rng& rng) {
    const Slot s = where_.at(q.id);
    qsim::apply_channel_stochastic(regs_[s.reg], ch, s.idx, rng);
}

Qubit World::append_ancilla(const qsim::StateVector& one_qubit, Qubit attach_to) {
    QAV_CHECK(one_qubit.num_qubits() == 1, "ancilla must be a single qubit");
    const int reg = reg_of(attach_to);
    QAV_CHECK(regs_[reg].num_qubits() + 1 <= qsim::kHardMaxQubits,
              "ancilla would exceed the qubit cap");
    qsim::StateVector merged = qsim::StateVector::tensor(regs_[reg], one_qubit);
    regs_[reg] = std::move(merged);
    const uint64_t id = next_id_++;
    const int idx = regs_[reg].num_qubits() - 1;
    members_[reg].push_back(id);
    where_[id] = {reg, idx};
    return {id};
}

bool World::project_onto(const qsim::StateVector& reference,
                         const std::vector<Qubit>& qubits, Rng& rng) {
    const int reg = merge_for(qubits);
    qsim::StateVector& psi = regs_[reg];
    QAV_CHECK(reference.num_qubits() == static_cast<int>(qubits.size()),
              "reference size must match the projected qubits");
    // The reference is expressed over `qubits` in the given order; require
    // them to be the leading register positions so extra qubits appended
    // later (adversary ancillas) sit in the trailing factor.
    const std::vector<int> idx = indices_in_reg(qubits);
    for (size_t i = 0; i < idx.size(); ++i)
        QAV_CHECK(idx[i] == static_cast<int>(i), "projection qubit order mismatch");
    QAV_CHECK(psi.num_qubits() >= reference.num_qubits(), "register too small");

    // Two-outcome measurement of |ref><ref| (x) I on the trailing qubits:
    // with qubit 0 as the top bit, amplitude index = r * rest_dim + j.
    const Eigen::Index ref_dim = reference.dim();
    const Eigen::Index rest_dim = psi.dim() / ref_dim;
    qsim::VectorXcd overlap = qsim::VectorXcd::Zero(rest_dim);
    for (Eigen::Index r = 0; r < ref_dim; ++r) {
        const qsim::cd c = std::conj(reference.amplitudes()(r));
        if (c == qsim::cd(0, 0)) continue;
        overlap += c * psi.amplitudes().segment(r * rest_dim, rest_dim);
    }
    const double p_same = overlap.squaredNorm();
    if (rng.uniform01() < p_same) {
        const double scale = 1.0 / std::sqrt(p_same);
        for (Eigen::Index r = 0; r < ref_dim; ++r)
            psi.amplitudes().segment(r * rest_dim, rest_dim) =
                reference.amplitudes()(r) * overlap * scale;
        return true;
    }
    for (Eigen::Index r = 0; r < ref_dim; ++r)
        psi.amplitudes().segment(r * rest_dim, rest_dim) -=
            reference.amplitudes()(r) * overlap;
    psi.renormalize();
    return false;
}

}  // namespace qav::prim
