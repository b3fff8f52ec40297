#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "qav/adversary/attack.hpp"
#include "qav/common/error.hpp"

using namespace qav;
using namespace qav::adv;

namespace {

DetectionConfig make_config(AttackKind kind, double beta2, long long trials,
                            int decoys, DecoySet set) {
    DetectionConfig cfg;
    cfg.attack.kind = kind;
    cfg.attack.beta2 = beta2;
    cfg.decoys_per_trial = decoys;
    cfg.decoy_set = set;
    cfg.trials = trials;
    return cfg;
}

}  // namespace

TEST(Taps, NoneAttackHasNoTap) {
    AttackSpec spec;
    EXPECT_EQ(make_tap(spec), nullptr);
    EXPECT_EQ(tap_policy(spec, nullptr).tap, nullptr);
}

TEST(Taps, KindNamesRoundTrip) {
    EXPECT_EQ(attack_kind_from_name("intercept-resend"), AttackKind::intercept_resend);
    EXPECT_EQ(attack_kind_from_name("entangle-measure"), AttackKind::entangle_measure);
    EXPECT_EQ(attack_kind_from_name("none"), AttackKind::none);
    EXPECT_THROW(attack_kind_from_name("siphon"), ConfigError);
}

TEST(InterceptResend, PerDecoyErrorNearQuarter) {
    const auto cfg = make_config(AttackKind::intercept_resend, 0.0, 2000, 10,
                                 DecoySet::all4);
    Rng rng(404);
    const AttackReport report = detection_experiment(cfg, rng);
    EXPECT_EQ(report.decoy_units, 20000);
    const double sigma = std::sqrt(0.25 * 0.75 / report.decoy_units);
    EXPECT_NEAR(report.per_decoy_error_rate(), 0.25, 4.0 * sigma);
}

TEST(InterceptResend, RunDetectionMatchesGeometricForm) {
    for (const int decoys : {4, 10}) {
        const auto cfg = make_config(AttackKind::intercept_resend, 0.0, 4000, decoys,
                                     DecoySet::all4);
        Rng rng(500 + decoys);
        const AttackReport report = detection_experiment(cfg, rng);
        const double expect = 1.0 - std::pow(0.75, decoys);
        const double sigma = std::sqrt(expect * (1.0 - expect) / cfg.trials);
        EXPECT_NEAR(report.run_detection_rate(), expect, 4.0 * sigma) << decoys;
    }
}

TEST(InterceptResend, PayloadGuessedAtThreeQuarters) {
    auto cfg = make_config(AttackKind::intercept_resend, 0.0, 3000, 1, DecoySet::all4);
    cfg.payload_bits_per_trial = 8;
    Rng rng(606);
    const AttackReport report = detection_experiment(cfg, rng);
    const double accuracy =
        static_cast<double>(report.payload_correct) / report.payload_bits;
    const double sigma = std::sqrt(0.75 * 0.25 / report.payload_bits);
    EXPECT_NEAR(accuracy, 0.75, 4.0 * sigma);
    EXPECT_NEAR(report.info_proxy(), 0.5, 8.0 * sigma);
}

TEST(EntangleMeasure, ZeroCouplingIsInvisible) {
    auto cfg = make_config(AttackKind::entangle_measure, 0.0, 2000, 10, DecoySet::all4);
    cfg.payload_bits_per_trial = 4;
    Rng rng(707);
    const AttackReport report = detection_experiment(cfg, rng);
    EXPECT_EQ(report.decoy_errors, 0);
    EXPECT_EQ(report.detections, 0);
}

TEST(EntangleMeasure, PerDecoyErrorIsHalfCoupling) {
    for (const double beta2 : {0.25, 0.5, 1.0}) {
        const auto cfg = make_config(AttackKind::entangle_measure, beta2, 3000, 10,
                                     DecoySet::all4);
        Rng rng(static_cast<uint64_t>(beta2 * 1000) + 9);
        const AttackReport report = detection_experiment(cfg, rng);
        const double expect = beta2 / 2.0;
        const double sigma = std::sqrt(expect * (1.0 - expect) / report.decoy_units);
        EXPECT_NEAR(report.per_decoy_error_rate(), expect, 4.0 * sigma) << beta2;
    }
}

TEST(EntangleMeasure, DiagonalDecoysNeverFire) {
    const auto cfg = make_config(AttackKind::entangle_measure, 1.0, 3000, 10,
                                 DecoySet::diagonal_only);
    Rng rng(808);
    const AttackReport report = detection_experiment(cfg, rng);
    EXPECT_EQ(report.decoy_errors, 0);
    EXPECT_EQ(report.run_detection_rate(), 0.0);
}

TEST(EntangleMeasure, ComputationalDecoysFireAtFullCoupling) {
    const auto cfg = make_config(AttackKind::entangle_measure, 0.4, 3000, 10,
                                 DecoySet::computational_only);
    Rng rng(909);
    const AttackReport report = detection_experiment(cfg, rng);
    const double sigma = std::sqrt(0.4 * 0.6 / report.decoy_units);
    EXPECT_NEAR(report.per_decoy_error_rate(), 0.4, 4.0 * sigma);
}

TEST(EntangleMeasure, LeaksAlmostNothingAboutPayload) {
    auto cfg = make_config(AttackKind::entangle_measure, 0.5, 3000, 1, DecoySet::all4);
    cfg.payload_bits_per_trial = 8;
    Rng rng(111);
    const AttackReport report = detection_experiment(cfg, rng);
    EXPECT_LT(report.info_proxy(), 0.05);
}

TEST(Taps, TapProbabilityScalesExposure) {
    auto cfg = make_config(AttackKind::intercept_resend, 0.0, 4000, 10, DecoySet::all4);
    cfg.attack.tap_probability = 0.5;
    Rng rng(212);
    const AttackReport report = detection_experiment(cfg, rng);
    const double expect = 0.5 * 0.25;
    const double sigma = std::sqrt(expect * (1.0 - expect) / report.decoy_units);
    EXPECT_NEAR(report.per_decoy_error_rate(), expect, 4.0 * sigma);
}

TEST(Reports, RatioAccessorsHandleEmptyCounts) {
    AttackReport empty;
    EXPECT_EQ(empty.run_detection_rate(), 0.0);
    EXPECT_EQ(empty.per_decoy_error_rate(), 0.0);
    EXPECT_EQ(empty.info_proxy(), 0.0);
}
