#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qav/adversary/attack.hpp"
#include "qav/analysis/efficiency.hpp"
#include "qav/analysis/fidelity.hpp"
#include "qav/protocols/config.hpp"

namespace qav::analysis {

struct SuccessResult {
    proto::ProtocolId id = proto::ProtocolId::qav2;
    int n = 0;
    int k = 0;
    int l = 0;
    long long trials = 0;
    long long vetoes = 0;
    long long aborts = 0;

    double rate() const;
    // Reference veto-detection probability: 0 for k=0, 1-2^-l for the
    // parity schemes, 1 for the deterministic ones.
    double expected() const;
    // Binomial standard deviation of the empirical rate at expected().
    double sigma() const;
};

// `trials` independent runs of `base` with k vetoers placed uniformly at
// random each trial; trial t draws from a generator seeded base.seed xor t.
// Runs are distributed over worker threads with deterministic aggregation.
SuccessResult success_probability_experiment(const proto::ProtocolConfig& base, int k,
                                             long long trials);

struct IterationProfile {
    proto::ProtocolId id = proto::ProtocolId::qav6;
    int n = 0;
    std::vector<int> iterations;  // indexed by k = 0..n
};

// Noiseless per-k iteration counts for the iterative schemes (rkqav, qav6);
// deterministic, so one run per k suffices.
IterationProfile iteration_profile(proto::ProtocolId id, int n, uint64_t seed);

struct TradeoffRow {
    int l = 0;
    double correctness = 0.0;  // 1 - 2^-l
    double fidelity = 0.0;     // per-unit closed form raised to the l-th power
};

// Correctness against robustness over a grid of key lengths; every entry of
// the grid must be >= 1.
std::vector<TradeoffRow> robustness_vs_correctness(proto::ProtocolId id, int n,
                                                   qsim::ChannelKind kind, double eta,
                                                   const std::vector<int>& l_grid);

// CSV emitters with pinned column schemas and fixed-precision formatting, so
// equal inputs give byte-identical output.
std::string fidelity_csv(proto::ProtocolId id, qsim::ChannelKind kind,
                         const std::vector<FidelityPoint>& points);
std::string efficiency_csv(const std::vector<EfficiencyReport>& rows);
std::string success_csv(const std::vector<SuccessResult>& rows);
std::string attack_csv(const adv::DetectionConfig& cfg, const adv::AttackReport& report);
std::string iteration_csv(const IterationProfile& profile);
std::string tradeoff_csv(proto::ProtocolId id, qsim::ChannelKind kind, double eta,
                         const std::vector<TradeoffRow>& rows);

}  // namespace qav::analysis
