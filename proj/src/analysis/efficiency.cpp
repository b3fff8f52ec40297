#include "qav/analysis/efficiency.hpp"

#include <numeric>

#include "qav/common/error.hpp"

namespace qav::analysis {

using proto::ProtocolId;

Rational::Rational(long long n, long long d) : num(n), den(d) {
    QAV_CHECK(den != 0, "rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
}

Rational Rational::operator/(const Rational& o) const {
    QAV_CHECK(o.num != 0, "rational division by zero");
    return Rational(num * o.den, den * o.num);
}

long long Rational::as_integer() const {
    QAV_CHECK(den == 1, "expected an integral count");
    return num;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

void check_inputs(const EfficiencyInputs& in) {
    if (in.n < 2) throw ConfigError("efficiency accounting needs n >= 2");
    if (in.l < 1) throw ConfigError("efficiency accounting needs l >= 1");
    if (in.delta0.num < 0 || in.delta1.num < 0)
        throw ConfigError("decoy ratios must be nonnegative");
    if (in.id == ProtocolId::qav7 && in.m <= in.l)
        throw ConfigError("qav7 resource width must exceed the travel-set size");
}

long long integral(const Rational& r, const char* what) {
    if (!r.is_integer())
        throw ConfigError(std::string("non-integral ") + what +
                          "; pick ratios that yield whole decoy counts");
    return r.num;
}

EfficiencyReport finish(const EfficiencyInputs& in, Rational q, Rational b) {
    EfficiencyReport rep;
    rep.inputs = in;
    rep.q = integral(q, "qubit count");
    rep.b = integral(b, "classical bit count");
    rep.c = 1;
    rep.eta = Rational(rep.c) / Rational(rep.q + rep.b);
    return rep;
}

}  // namespace

EfficiencyReport counted_efficiency(const EfficiencyInputs& in) {
    check_inputs(in);
    const int n = in.n;
    const Rational l{in.l};
    const Rational one{1};
    const Rational d0 = in.delta0;
    const Rational d1 = in.delta1;
    Rational q{0};
    Rational b{0};

    switch (in.id) {
        case ProtocolId::rkqav: {
            // Dealer sends every voter its qubit of each payload and check
            // copy under decoys; each iteration's qubit returns under fresh
            // decoys (the qubits themselves are already counted).
            const Rational copies = (one + d0) * l;
            for (int i = 0; i < n; ++i) q = q + copies * (one + d1);
            for (int t = 0; t < in.l; ++t) q = q + Rational(n) * d1;
            break;
        }
        case ProtocolId::wqav: {
            // One prepare-and-measure key per voter (4 qubits per sifted
            // bit), the decoy-protected shared copies, and one l-bit masked
            // broadcast per voter.
            for (int i = 0; i < n; ++i) q = q + Rational(4) * l;
            for (int i = 0; i < n; ++i) q = q + (one + d0) * l * (one + d1);
            for (int i = 0; i < n; ++i) b = b + l;
            break;
        }
        case ProtocolId::qav1: {
            // One prepare-and-measure key per voter pair, one parity
            // broadcast per voter.
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) q = q + Rational(4) * l;
            for (int i = 0; i < n; ++i) b = b + l;
            break;
        }
        case ProtocolId::qav2:
        case ProtocolId::qav5: {
            // l dealt pairs per voter pair, both halves travelling once
            // under decoys; one parity broadcast per voter.
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    q = q + Rational(2) * l * (one + d1);
            for (int i = 0; i < n; ++i) b = b + l;
            break;
        }
        case ProtocolId::qav3: {
            // l/2 pairs per voter pair whose travel half makes two decoyed
            // hops around the coding step; four announced bits per key bit
            // per voter.
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) q = q + l * (one + d1);
            for (int i = 0; i < n; ++i) b = b + Rational(4) * l;
            break;
        }
        case ProtocolId::qav4: {
            // Mediated pairs at quarter yield: 4l pairs of two qubits per
            // voter pair; one parity broadcast per voter.
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) q = q + Rational(8) * l;
            for (int i = 0; i < n; ++i) b = b + l;
            break;
        }
        case ProtocolId::qav6: {
            // Per iteration: a fresh pair, then the travel half rides n+1
            // decoyed hops. The verdict is read by the dealer; no broadcast
            // enters the accounting.
            for (int t = 0; t < in.l; ++t)
                q = q + Rational(2) + Rational(n + 1) * (one + d1);
            break;
        }
        case ProtocolId::qav7: {
            // The m-qubit resource once, the l travel qubits riding n+1
            // decoyed hops, and the single announced mismatch bit.
            q = Rational(in.m);
            for (int hop = 0; hop < n + 1; ++hop) q = q + l * (one + d1);
            b = Rational(1);
            break;
        }
    }
    return finish(in, q, b);
}

EfficiencyReport formula_efficiency(const EfficiencyInputs& in) {
    check_inputs(in);
    const Rational n{in.n};
    const Rational l{in.l};
    const Rational one{1};
    const Rational d0 = in.delta0;
    const Rational d1 = in.delta1;
    Rational total{0};
    Rational b{0};

    switch (in.id) {
        case ProtocolId::rkqav:
            total = n * l * (one + d0 + Rational(2) * d1 + d0 * d1);
            break;
        case ProtocolId::wqav:
            total = n * l * (Rational(6) + d0 + d1 + d0 * d1);
            b = n * l;
            break;
        case ProtocolId::qav1:
            total = (Rational(2) * n - one) * n * l;
            b = n * l;
            break;
        case ProtocolId::qav2:
        case ProtocolId::qav5:
            total = ((n - one) * (d1 + one) + one) * n * l;
            b = n * l;
            break;
        case ProtocolId::qav3:
            total = ((n - one) * (d1 + one) / Rational(2) + Rational(4)) * n * l;
            b = Rational(4) * n * l;
            break;
        case ProtocolId::qav4:
            total = n * l * (Rational(4) * n - Rational(3));
            b = n * l;
            break;
        case ProtocolId::qav6:
            total = ((n + one) * (one + d1) + Rational(2)) * l;
            break;
        case ProtocolId::qav7:
            total = Rational(in.m) + (n + one) * (one + d1) * l + one;
            b = Rational(1);
            break;
    }
    return finish(in, total - b, b);
}

std::vector<EfficiencyReport> efficiency_table(int n, int l_keys, Rational delta0,
                                               Rational delta1, int l_ring, int m) {
    std::vector<EfficiencyReport> rows;
    for (ProtocolId id :
         {ProtocolId::rkqav, ProtocolId::wqav, ProtocolId::qav1, ProtocolId::qav2,
          ProtocolId::qav3, ProtocolId::qav4, ProtocolId::qav5, ProtocolId::qav6,
          ProtocolId::qav7}) {
        EfficiencyInputs in;
        in.id = id;
        in.n = n;
        in.delta0 = delta0;
        in.delta1 = delta1;
        in.m = m;
        const bool ring = id == ProtocolId::qav6 || id == ProtocolId::qav7;
        in.l = ring ? l_ring : l_keys;
        rows.push_back(counted_efficiency(in));
    }
    return rows;
}

}  // namespace qav::analysis
