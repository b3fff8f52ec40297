#include "qav/qsim/rng.hpp"

#include "qav/common/error.hpp"

namespace qav {

namespace {

uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) : seed_(seed) {
    uint64_t x = seed;
    for (auto& s : s_) s = splitmix64(x);
}

uint64_t Rng::next_u64() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

uint64_t Rng::uniform_below(uint64_t n) {
    QAV_CHECK(n >= 1, "uniform_below requires n >= 1");
    const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
}

bool Rng::bernoulli(double p) {
    QAV_CHECK(p >= 0.0 && p <= 1.0, "bernoulli probability out of [0,1]");
    return uniform01() < p;
}

Rng Rng::child(uint64_t label) const {
    uint64_t x = seed_ ^ (0xa0761d6478bd642fULL * (label + 1));
    return Rng(splitmix64(x));
}

}  // namespace qav
