#include "qav/qsim/state.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qav/common/error.hpp"

namespace qav::qsim {

namespace {

void check_targets(const std::vector<int>& targets, int num_qubits) {
    QAV_CHECK(!targets.empty(), "no target qubits given");
    for (int t : targets)
        QAV_CHECK(t >= 0 && t < num_qubits, "target qubit out of range");
    for (size_t a = 0; a < targets.size(); ++a)
        for (size_t b = a + 1; b < targets.size(); ++b)
            QAV_CHECK(targets[a] != targets[b], "duplicate target qubit");
}

}  // namespace

StateVector::StateVector(int num_qubits, int max_qubits) : num_qubits_(num_qubits) {
    QAV_CHECK(max_qubits <= kHardMaxQubits, "register cap above hard maximum");
    if (num_qubits < 1 || num_qubits > max_qubits)
        throw ConfigError("register size " + std::to_string(num_qubits) +
                          " outside [1, " + std::to_string(max_qubits) + "]");
    amps_ = VectorXcd::Zero(Eigen::Index(1) << num_qubits);
    amps_(0) = 1.0;
}

StateVector StateVector::computational(const std::string& bits, int max_qubits) {
    StateVector s(static_cast<int>(bits.size()), max_qubits);
    Eigen::Index idx = 0;
    for (char c : bits) {
        QAV_CHECK(c == '0' || c == '1', "bitstring must be over {0,1}");
        idx = (idx << 1) | (c == '1' ? 1 : 0);
    }
    s.amps_(0) = 0.0;
    s.amps_(idx) = 1.0;
    return s;
}

StateVector StateVector::ghz(int num_qubits, int max_qubits) {
    QAV_CHECK(num_qubits >= 2, "GHZ-type state needs at least 2 qubits");
    StateVector s(num_qubits, max_qubits);
    const double a = 1.0 / std::sqrt(2.0);
    s.amps_(0) = a;
    s.amps_(s.dim() - 1) = a;
    return s;
}

StateVector StateVector::bell_phi_plus() { return ghz(2); }

StateVector StateVector::cluster4() {
    StateVector s(4);
    s.amps_(0) = 0.0;
    s.amps_(0b0000) = 0.5;
    s.amps_(0b0011) = 0.5;
    s.amps_(0b1100) = 0.5;
    s.amps_(0b1111) = -0.5;
    return s;
}

StateVector StateVector::bb84(int index) {
    QAV_CHECK(index >= 0 && index < 4, "BB84 state index out of range");
    StateVector s(1);
    const double a = 1.0 / std::sqrt(2.0);
    switch (index) {
        case 0: break;
        case 1: s.amps_(0) = 0.0; s.amps_(1) = 1.0; break;
        case 2: s.amps_(0) = a; s.amps_(1) = a; break;
        case 3: s.amps_(0) = a; s.amps_(1) = -a; break;
    }
    return s;
}

StateVector StateVector::tensor(const StateVector& a, const StateVector& b) {
    StateVector out(a.num_qubits_ + b.num_qubits_, kHardMaxQubits);
    for (Eigen::Index i = 0; i < a.dim(); ++i)
        for (Eigen::Index j = 0; j < b.dim(); ++j)
            out.amps_(i * b.dim() + j) = a.amps_(i) * b.amps_(j);
    return out;
}

MatrixXcd embed_operator(const MatrixXcd& op, const std::vector<int>& targets,
                         int num_qubits) {
    check_targets(targets, num_qubits);
    const int k = static_cast<int>(targets.size());
    QAV_CHECK(op.rows() == (1 << k) && op.cols() == (1 << k),
              "operator dimension does not match target count");
    const Eigen::Index dim = Eigen::Index(1) << num_qubits;
    MatrixXcd full = MatrixXcd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        int sub_in = 0;
        for (int t : targets) sub_in = (sub_in << 1) | ((col >> (num_qubits - 1 - t)) & 1);
        for (int sub_out = 0; sub_out < (1 << k); ++sub_out) {
            const cd amp = op(sub_out, sub_in);
            if (amp == cd(0, 0)) continue;
            Eigen::Index row = col;
            for (int pos = 0; pos < k; ++pos) {
                const Eigen::Index bitmask = Eigen::Index(1) << (num_qubits - 1 - targets[pos]);
                if ((sub_out >> (k - 1 - pos)) & 1) row |= bitmask;
                else row &= ~bitmask;
            }
            full(row, col) += amp;
        }
    }
    return full;
}

void StateVector::apply_unitary(const MatrixXcd& u, const std::vector<int>& targets) {
    check_targets(targets, num_qubits_);
    const int k = static_cast<int>(targets.size());
    QAV_CHECK(u.rows() == (1 << k) && u.cols() == (1 << k),
              "unitary dimension does not match target count");
    if (k == 1) {
        apply_1q(u, targets[0]);
        return;
    }
    // Iterate over indices with all target bits clear; scatter each block.
    std::vector<Eigen::Index> bit(k);
    for (int pos = 0; pos < k; ++pos)
        bit[pos] = Eigen::Index(1) << (num_qubits_ - 1 - targets[pos]);
    Eigen::Index targets_mask = 0;
    for (Eigen::Index b : bit) targets_mask |= b;

    const int sub_dim = 1 << k;
    std::vector<cd> block(sub_dim);
    for (Eigen::Index base = 0; base < dim(); ++base) {
        if (base & targets_mask) continue;
        for (int s = 0; s < sub_dim; ++s) {
            Eigen::Index idx = base;
            for (int pos = 0; pos < k; ++pos)
                if ((s >> (k - 1 - pos)) & 1) idx |= bit[pos];
            block[s] = amps_(idx);
        }
        for (int r = 0; r < sub_dim; ++r) {
            cd acc(0, 0);
            for (int c = 0; c < sub_dim; ++c) acc += u(r, c) * block[c];
            Eigen::Index idx = base;
            for (int pos = 0; pos < k; ++pos)
                if ((r >> (k - 1 - pos)) & 1) idx |= bit[pos];
            amps_(idx) = acc;
        }
    }
}

void StateVector::apply_1q(const Matrix2cd& u, int target) {
    QAV_CHECK(target >= 0 && target < num_qubits_, "target qubit out of range");
    const Eigen::Index bit = Eigen::Index(1) << (num_qubits_ - 1 - target);
    for (Eigen::Index i = 0; i < dim(); ++i) {
        if (i & bit) continue;
        const cd a0 = amps_(i);
        const cd a1 = amps_(i | bit);
        amps_(i) = u(0, 0) * a0 + u(0, 1) * a1;
        amps_(i | bit) = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

cd StateVector::inner_product(const StateVector& other) const {
    QAV_CHECK(num_qubits_ == other.num_qubits_, "inner product dimension mismatch");
    return amps_.dot(other.amps_);  // Eigen's dot conjugates the left side
}

double StateVector::norm() const { return amps_.norm(); }

void StateVector::renormalize() {
    const double n = norm();
    QAV_CHECK(n > 1e-12, "cannot renormalize a zero vector");
    amps_ /= n;
}

void StateVector::remove_product_qubit(int target, int observed_bit) {
    QAV_CHECK(target >= 0 && target < num_qubits_, "target qubit out of range");
    QAV_CHECK(num_qubits_ >= 2, "cannot remove the only qubit");
    const Eigen::Index bit = Eigen::Index(1) << (num_qubits_ - 1 - target);
    VectorXcd reduced(dim() / 2);
    Eigen::Index out = 0;
    double dropped = 0.0;
    for (Eigen::Index i = 0; i < dim(); ++i) {
        const bool set = (i & bit) != 0;
        if (set == (observed_bit == 1)) reduced(out++) = amps_(i);
        else dropped += std::norm(amps_(i));
    }
    QAV_CHECK(dropped < 1e-9, "qubit to remove is not in the stated product state");
    num_qubits_ -= 1;
    amps_ = std::move(reduced);
    renormalize();
}

DensityOperator::DensityOperator(const StateVector& psi)
    : num_qubits_(psi.num_qubits()),
      rho_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

DensityOperator::DensityOperator(int num_qubits, MatrixXcd rho)
    : num_qubits_(num_qubits), rho_(std::move(rho)) {
    QAV_CHECK(rho_.rows() == (Eigen::Index(1) << num_qubits) && rho_.rows() == rho_.cols(),
              "density matrix dimension mismatch");
}

void DensityOperator::apply_unitary(const MatrixXcd& u, const std::vector<int>& targets) {
    const MatrixXcd full = embed_operator(u, targets, num_qubits_);
    rho_ = full * rho_ * full.adjoint();
}

double DensityOperator::trace() const { return rho_.trace().real(); }

double DensityOperator::hermiticity_defect() const {
    return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(rho_);
    return solver.eigenvalues().minCoeff();
}

double DensityOperator::fidelity(const StateVector& target) const {
    QAV_CHECK(target.num_qubits() == num_qubits_, "fidelity dimension mismatch");
    const cd v = (target.amplitudes().adjoint() * rho_ * target.amplitudes())(0, 0);
    return v.real();
}

}  // namespace qav::qsim
