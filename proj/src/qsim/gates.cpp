#include "qav/qsim/gates.hpp"

#include <cmath>
#include <numbers>

#include "qav/common/error.hpp"

namespace qav::qsim {

Matrix2cd identity2() { return Matrix2cd::Identity(); }

Matrix2cd pauli_x() {
    Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Matrix2cd pauli_y() {
    Matrix2cd m;
    m << cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0);
    return m;
}

Matrix2cd pauli_z() {
    Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

Matrix2cd hadamard() {
    static const Matrix2cd m = [] {
        Matrix2cd h;
        const double s = 1.0 / std::sqrt(2.0);
        h << s, s, s, -s;
        return h;
    }();
    return m;
}

Matrix2cd phase_gate(int t) {
    QAV_CHECK(t >= 0 && t <= 62, "phase_gate exponent out of range");
    Matrix2cd m = Matrix2cd::Identity();
    const double angle = std::numbers::pi * std::ldexp(1.0, -t);
    m(1, 1) = std::polar(1.0, angle);
    return m;
}

Eigen::Matrix4cd cnot() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

namespace {

Matrix2cd letter_matrix(PauliLetter l) {
    switch (l) {
        case PauliLetter::I: return identity2();
        case PauliLetter::X: return pauli_x();
        case PauliLetter::Y: return pauli_y();
        case PauliLetter::Z: return pauli_z();
    }
    throw InternalError("unknown Pauli letter");
}

// letter_a * letter_b = i^phase * letter, tabulated.
void letter_product(PauliLetter a, PauliLetter b, PauliLetter& out, int& phase) {
    if (a == PauliLetter::I) { out = b; phase = 0; return; }
    if (b == PauliLetter::I) { out = a; phase = 0; return; }
    if (a == b) { out = PauliLetter::I; phase = 0; return; }
    // XY=iZ, YZ=iX, ZX=iY; reversed order picks up i^3.
    auto cyc = [](PauliLetter x, PauliLetter y) {
        return (x == PauliLetter::X && y == PauliLetter::Y) ||
               (x == PauliLetter::Y && y == PauliLetter::Z) ||
               (x == PauliLetter::Z && y == PauliLetter::X);
    };
    if (cyc(a, b)) {
        phase = 1;
    } else {
        phase = 3;
    }
    if (a != PauliLetter::X && b != PauliLetter::X) out = PauliLetter::X;
    else if (a != PauliLetter::Y && b != PauliLetter::Y) out = PauliLetter::Y;
    else out = PauliLetter::Z;
}

}  // namespace

MatrixXcd PauliWord::to_unitary() const {
    QAV_CHECK(!letters.empty(), "Pauli word needs at least one letter");
    MatrixXcd u = MatrixXcd::Identity(1, 1);
    for (PauliLetter l : letters) {
        MatrixXcd next(u.rows() * 2, u.cols() * 2);
        const Matrix2cd m = letter_matrix(l);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                next.block(r * u.rows(), c * u.cols(), u.rows(), u.cols()) = m(r, c) * u;
        u = std::move(next);
    }
    static const cd i_powers[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    return i_powers[((phase_power % 4) + 4) % 4] * u;
}

PauliWord PauliWord::times(const PauliWord& other) const {
    QAV_CHECK(letters.size() == other.letters.size(), "Pauli word arity mismatch");
    PauliWord result;
    result.phase_power = phase_power + other.phase_power;
    result.letters.resize(letters.size());
    for (size_t k = 0; k < letters.size(); ++k) {
        int ph = 0;
        letter_product(letters[k], other.letters[k], result.letters[k], ph);
        result.phase_power += ph;
    }
    result.phase_power = ((result.phase_power % 4) + 4) % 4;
    return result;
}

bool PauliWord::is_identity_up_to_phase() const {
    for (PauliLetter l : letters)
        if (l != PauliLetter::I) return false;
    return true;
}

bool PauliWord::same_up_to_phase(const PauliWord& other) const {
    return letters == other.letters;
}

std::string PauliWord::str() const {
    static const char* prefix[4] = {"", "i", "-", "-i"};
    std::string s = prefix[((phase_power % 4) + 4) % 4];
    for (PauliLetter l : letters) {
        switch (l) {
            case PauliLetter::I: s += 'I'; break;
            case PauliLetter::X: s += 'X'; break;
            case PauliLetter::Y: s += 'Y'; break;
            case PauliLetter::Z: s += 'Z'; break;
        }
    }
    return s;
}

PauliWord build_pauli_word(const std::vector<std::string>& symbols) {
    QAV_CHECK(!symbols.empty(), "empty Pauli word");
    PauliWord w;
    for (const std::string& sym : symbols) {
        std::string body = sym;
        if (!body.empty() && body[0] == 'i') {
            w.phase_power += 1;
            body = body.substr(1);
        }
        if (body == "I") w.letters.push_back(PauliLetter::I);
        else if (body == "X") w.letters.push_back(PauliLetter::X);
        else if (body == "Y") w.letters.push_back(PauliLetter::Y);
        else if (body == "Z") w.letters.push_back(PauliLetter::Z);
        else throw ConfigError("unknown Pauli symbol: " + sym);
    }
    w.phase_power %= 4;
    return w;
}

}  // namespace qav::qsim
