#pragma once

#include <cstdint>

namespace qav {

// Deterministic seeded generator (xoshiro256** with splitmix64 seeding).
// All sampling goes through this class so that a fixed seed yields the same
// stream on every platform; std::random distributions are avoided because
// their output is implementation-defined.
class Rng {
  public:
    explicit Rng(uint64_t seed);

    uint64_t next_u64();

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01();

    // Uniform integer in [0, n), n >= 1. Rejection-sampled, no modulo bias.
    uint64_t uniform_below(uint64_t n);

    bool bernoulli(double p);

    // Fair coin as a bit.
    int coin() { return static_cast<int>(next_u64() >> 63); }

    // Independent child stream; `label` distinguishes siblings.
    Rng child(uint64_t label) const;

  private:
    uint64_t s_[4];
    uint64_t seed_;
};

}  // namespace qav
