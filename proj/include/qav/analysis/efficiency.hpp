#pragma once

#include <string>
#include <vector>

#include "qav/protocols/config.hpp"

namespace qav::analysis {

// Reduced fraction over 64-bit terms; all table entries fit comfortably.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long value) : num(value) {}
    Rational(long long n, long long d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

    bool is_integer() const { return den == 1; }
    // Throws InternalError unless the value is integral.
    long long as_integer() const;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;  // "c/d", or "c" when integral
};

struct EfficiencyInputs {
    proto::ProtocolId id = proto::ProtocolId::qav2;
    int n = 4;
    // Key bits / shared copies for the key-based rows, ring iterations for
    // qav6, and the travel-set size for qav7 (the table's inferred reading).
    int l = 10;
    Rational delta0{1};
    Rational delta1{1};
    int m = 3;  // qav7 resource width
};

// Costs of one full run: q transmitted-or-consumed qubits, b classical
// result-bearing bits (decoy-check chatter excluded), c output bits.
struct EfficiencyReport {
    EfficiencyInputs inputs;
    long long q = 0;
    long long b = 0;
    long long c = 1;
    Rational eta;  // c/(q+b), reduced
};

// Costs summed piecewise over the transmission schedule (per key, per copy,
// per hop). Throws ConfigError when a decoy product is not integral.
EfficiencyReport counted_efficiency(const EfficiencyInputs& in);

// The published per-row cost expression, instantiated symbolically. The two
// codepaths agree for every protocol and parameter set; tests pin this.
EfficiencyReport formula_efficiency(const EfficiencyInputs& in);

// All nine rows for `n` voters at the table's parameter assignments:
// l = l_keys for the key-based rows, l = l_ring and width m for the ring
// rows, shared decoy ratios. Defaults reproduce the published column.
std::vector<EfficiencyReport> efficiency_table(int n, int l_keys = 10,
                                               Rational delta0 = Rational{1},
                                               Rational delta1 = Rational{1},
                                               int l_ring = 2, int m = 3);

}  // namespace qav::analysis
