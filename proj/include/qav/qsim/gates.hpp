#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace qav::qsim {

using cd = std::complex<double>;
using Matrix2cd = Eigen::Matrix2cd;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;

Matrix2cd identity2();
Matrix2cd pauli_x();
Matrix2cd pauli_y();
Matrix2cd pauli_z();
Matrix2cd hadamard();

// diag(1, exp(i*pi*2^-t)); t = 0 is the plain sigma_z.
Matrix2cd phase_gate(int t);

// CNOT on (control, target) ordered as the two qubits of a 4-dim register.
Eigen::Matrix4cd cnot();

enum class PauliLetter { I, X, Y, Z };

// Tensor word of Pauli letters with a global phase i^phase_power, e.g. the
// two-qubit word i*(X(x)X) is {phase_power: 1, letters: [X, X]}.
// Every such word squares to +/-identity and anticommutes or commutes with
// any other word, which is what the veto encodings rely on.
struct PauliWord {
    int phase_power = 0;  // exponent of i, reduced mod 4
    std::vector<PauliLetter> letters;

    int arity() const { return static_cast<int>(letters.size()); }
    MatrixXcd to_unitary() const;
    PauliWord times(const PauliWord& other) const;
    // True when the word is the identity letter string (any global phase).
    bool is_identity_up_to_phase() const;
    // Letterwise equality ignoring global phase.
    bool same_up_to_phase(const PauliWord& other) const;
    std::string str() const;
};

// Builds a word from per-qubit symbols, each one of I, X, Y, Z optionally
// prefixed with "i" (e.g. {"iY", "X"}). Phases are retained as written.
PauliWord build_pauli_word(const std::vector<std::string>& symbols);

}  // namespace qav::qsim
