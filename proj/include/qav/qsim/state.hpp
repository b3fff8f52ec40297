#pragma once

#include <string>
#include <vector>

#include "qav/qsim/gates.hpp"

namespace qav::qsim {

// Registers above the default size are rejected so a typo cannot silently
// allocate gigabytes; ring-protocol profiling legitimately needs up to 16.
inline constexpr int kDefaultMaxQubits = 12;
inline constexpr int kHardMaxQubits = 16;

// Dense pure state of up to kHardMaxQubits qubits. Qubit 0 is the leftmost
// (most significant) position of the ket, so |q0 q1 ... q_{n-1}> maps to the
// amplitude index with q0 as the top bit.
class StateVector {
  public:
    StateVector(int num_qubits, int max_qubits = kDefaultMaxQubits);

    static StateVector computational(const std::string& bits,
                                     int max_qubits = kDefaultMaxQubits);
    // (|0...0> + |1...1>)/sqrt(2); n = 2 is the Bell pair |phi+>.
    static StateVector ghz(int num_qubits, int max_qubits = kDefaultMaxQubits);
    static StateVector bell_phi_plus();
    // (|0000> + |0011> + |1100> - |1111>)/2.
    static StateVector cluster4();
    // index 0..3 -> |0>, |1>, |+>, |->.
    static StateVector bb84(int index);
    static StateVector tensor(const StateVector& a, const StateVector& b);

    int num_qubits() const { return num_qubits_; }
    Eigen::Index dim() const { return amps_.size(); }
    const VectorXcd& amplitudes() const { return amps_; }
    VectorXcd& amplitudes() { return amps_; }

    void apply_unitary(const MatrixXcd& u, const std::vector<int>& targets);
    void apply_1q(const Matrix2cd& u, int target);

    cd inner_product(const StateVector& other) const;
    double norm() const;
    void renormalize();

    // Drops qubit `target`, which must be in a product state with the rest
    // (true right after a computational-basis measurement of it).
    void remove_product_qubit(int target, int observed_bit);

  private:
    int num_qubits_;
    VectorXcd amps_;
};

// Dense density operator for exact open-system evolution; used by the noise
// analysis where trajectory sampling would not give closed-form agreement.
class DensityOperator {
  public:
    explicit DensityOperator(const StateVector& psi);
    DensityOperator(int num_qubits, MatrixXcd rho);

    int num_qubits() const { return num_qubits_; }
    const MatrixXcd& matrix() const { return rho_; }

    void apply_unitary(const MatrixXcd& u, const std::vector<int>& targets);
    double trace() const;
    double hermiticity_defect() const;
    double min_eigenvalue() const;
    // <psi| rho |psi>, the squared-overlap fidelity against a pure target.
    double fidelity(const StateVector& target) const;

  private:
    int num_qubits_;
    MatrixXcd rho_;
};

// Expands a k-qubit operator to the full register given target positions.
MatrixXcd embed_operator(const MatrixXcd& op, const std::vector<int>& targets,
                         int num_qubits);

}  // namespace qav::qsim
