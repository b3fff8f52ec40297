#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "qav/analysis/efficiency.hpp"
#include "qav/analysis/experiments.hpp"
#include "qav/analysis/fidelity.hpp"
#include "qav/common/error.hpp"
#include "qav/protocols/config.hpp"

using namespace qav;
using namespace qav::analysis;
using proto::ProtocolId;
using qsim::ChannelKind;

namespace {

std::vector<double> eta_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(i * 0.05);
    return grid;
}

proto::ProtocolConfig lean(ProtocolId id, int n, int l, uint64_t seed) {
    proto::ProtocolConfig cfg;
    cfg.id = id;
    cfg.n = n;
    cfg.l = l;
    cfg.delta0 = 0.0;
    cfg.delta1 = 0.0;
    cfg.qds.enabled = false;
    cfg.record_transcript = false;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST(Fidelity, ClosedFormsMatchNumericEvolution) {
    const std::vector<std::pair<ProtocolId, int>> rows = {
        {ProtocolId::qav1, 4}, {ProtocolId::qav2, 4}, {ProtocolId::qav4, 4},
        {ProtocolId::qav5, 4}, {ProtocolId::qav6, 4}, {ProtocolId::qav7, 4},
    };
    for (const auto& [id, n] : rows) {
        for (const ChannelKind kind :
             {ChannelKind::amplitude_damping, ChannelKind::phase_damping}) {
            for (const auto& point : fidelity_sweep(id, n, kind, eta_grid())) {
                EXPECT_LE(point.abs_diff, 1e-9)
                    << proto::protocol_name(id) << " " << static_cast<int>(kind)
                    << " eta=" << point.eta;
            }
        }
    }
}

TEST(Fidelity, DenseCodingRowStaysInRangeAndIsLogged) {
    double worst = 0.0;
    for (const ChannelKind kind :
         {ChannelKind::amplitude_damping, ChannelKind::phase_damping}) {
        for (const auto& point :
             fidelity_sweep(ProtocolId::qav3, 2, kind, eta_grid())) {
            EXPECT_GE(point.closed_form, 0.0);
            EXPECT_LE(point.closed_form, 1.0);
            EXPECT_GE(point.numeric, 0.0);
            EXPECT_LE(point.numeric, 1.0);
            worst = std::max(worst, point.abs_diff);
        }
    }
    RecordProperty("max_abs_diff", std::to_string(worst));
}

TEST(Fidelity, DampingHurtsMoreThanDephasing) {
    const std::vector<std::pair<ProtocolId, int>> rows = {
        {ProtocolId::qav1, 4}, {ProtocolId::qav2, 4}, {ProtocolId::qav6, 4},
        {ProtocolId::qav7, 4},
    };
    for (const auto& [id, n] : rows) {
        for (double eta = 0.05; eta < 1.0; eta += 0.05) {
            const double ad =
                fidelity_closed_form(id, n, ChannelKind::amplitude_damping, eta);
            const double pd =
                fidelity_closed_form(id, n, ChannelKind::phase_damping, eta);
            EXPECT_LE(ad, pd + 1e-12) << proto::protocol_name(id) << " eta=" << eta;
        }
    }
}

TEST(Fidelity, EndpointsAreExact) {
    for (const ProtocolId id : {ProtocolId::qav1, ProtocolId::qav2, ProtocolId::qav6,
                                ProtocolId::qav7}) {
        for (const ChannelKind kind :
             {ChannelKind::amplitude_damping, ChannelKind::phase_damping}) {
            EXPECT_DOUBLE_EQ(fidelity_closed_form(id, 4, kind, 0.0), 1.0);
            EXPECT_DOUBLE_EQ(average_fidelity_numeric(id, 4, kind, 0.0), 1.0);
        }
    }
}

TEST(Fidelity, UnsupportedCombinationsThrow) {
    EXPECT_THROW(fidelity_closed_form(ProtocolId::rkqav, 4,
                                      ChannelKind::amplitude_damping, 0.1),
                 ConfigError);
    EXPECT_THROW(fidelity_closed_form(ProtocolId::qav6, 5,
                                      ChannelKind::amplitude_damping, 0.1),
                 ConfigError);
    EXPECT_THROW(average_fidelity_numeric(ProtocolId::rkqav, 4,
                                          ChannelKind::amplitude_damping, 0.1),
                 ConfigError);
}

TEST(Rationals, ArithmeticReduces) {
    EXPECT_EQ(Rational(2, 4), Rational(1, 2));
    EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
    EXPECT_EQ(Rational(3, 4) * Rational(2, 3), Rational(1, 2));
    EXPECT_EQ(Rational(1, 2) / Rational(1, 8), Rational(4));
    EXPECT_EQ(Rational(5, 2) - Rational(1, 2), Rational(2));
    EXPECT_EQ(Rational(6, 3).as_integer(), 2);
    EXPECT_THROW(Rational(1, 2).as_integer(), InternalError);
    EXPECT_EQ(Rational(3, 4).str(), "3/4");
    EXPECT_EQ(Rational(5).str(), "5");
}

TEST(Efficiency, FourVoterColumn) {
    const auto rows = efficiency_table(4);
    ASSERT_EQ(rows.size(), 9u);
    const std::vector<std::pair<ProtocolId, Rational>> expect = {
        {ProtocolId::rkqav, {1, 200}}, {ProtocolId::wqav, {1, 360}},
        {ProtocolId::qav1, {1, 280}},  {ProtocolId::qav2, {1, 280}},
        {ProtocolId::qav3, {1, 280}},  {ProtocolId::qav4, {1, 520}},
        {ProtocolId::qav5, {1, 280}},  {ProtocolId::qav6, {1, 24}},
        {ProtocolId::qav7, {1, 24}},
    };
    for (size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].inputs.id, expect[i].first);
        EXPECT_EQ(rows[i].eta, expect[i].second)
            << proto::protocol_name(rows[i].inputs.id);
        EXPECT_EQ(rows[i].c, 1);
        EXPECT_EQ(rows[i].eta, Rational(rows[i].c, rows[i].q + rows[i].b));
    }
}

TEST(Efficiency, CountedMatchesFormulaAcrossSizes) {
    for (int n = 3; n <= 8; ++n) {
        for (const auto& row : efficiency_table(n)) {
            const auto counted = counted_efficiency(row.inputs);
            const auto formula = formula_efficiency(row.inputs);
            EXPECT_EQ(counted.q, formula.q) << proto::protocol_name(row.inputs.id)
                                            << " n=" << n;
            EXPECT_EQ(counted.b, formula.b) << proto::protocol_name(row.inputs.id)
                                            << " n=" << n;
            EXPECT_EQ(counted.c, formula.c);
            EXPECT_EQ(counted.eta, formula.eta);
        }
    }
}

TEST(Efficiency, FractionalDecoyProductsAreRejected) {
    EfficiencyInputs in;
    in.id = ProtocolId::qav2;
    in.n = 4;
    in.l = 3;
    in.delta0 = Rational{1, 7};
    in.delta1 = Rational{1, 7};
    EXPECT_THROW(counted_efficiency(in), ConfigError);
}

TEST(Success, NoVetoersMeansNoVetoes) {
    const auto base = lean(ProtocolId::qav2, 4, 10, 90);
    const auto res = success_probability_experiment(base, 0, 2000);
    EXPECT_EQ(res.vetoes, 0);
    EXPECT_EQ(res.aborts, 0);
    EXPECT_EQ(res.rate(), 0.0);
    EXPECT_EQ(res.expected(), 0.0);
}

TEST(Success, ParityRateTracksKeyLength) {
    const auto base = lean(ProtocolId::qav2, 4, 8, 91);
    const auto res = success_probability_experiment(base, 2, 20000);
    EXPECT_NEAR(res.expected(), 1.0 - std::pow(2.0, -8), 1e-12);
    EXPECT_NEAR(res.rate(), res.expected(), 4.0 * res.sigma());
    EXPECT_EQ(res.aborts, 0);
}

TEST(Success, DeterministicSchemesAlwaysDetect) {
    const auto base = lean(ProtocolId::rkqav, 4, 10, 92);
    const auto res = success_probability_experiment(base, 3, 500);
    EXPECT_EQ(res.rate(), 1.0);
    EXPECT_EQ(res.expected(), 1.0);
}

TEST(Iterations, ProfilesFollowTwoAdicRule) {
    const auto profile = iteration_profile(ProtocolId::rkqav, 8, 7);
    ASSERT_EQ(profile.iterations.size(), 9u);
    const std::vector<int> expect = {4, 1, 2, 1, 3, 1, 2, 1, 4};
    EXPECT_EQ(profile.iterations, expect);

    const auto small = iteration_profile(ProtocolId::qav6, 4, 7);
    const std::vector<int> expect_small = {3, 1, 2, 1, 3};
    EXPECT_EQ(small.iterations, expect_small);
}

TEST(Tradeoff, LongerKeysTradeFidelityForCorrectness) {
    const std::vector<int> grid = {1, 2, 4, 8, 16};
    const auto rows = robustness_vs_correctness(
        ProtocolId::qav2, 4, ChannelKind::amplitude_damping, 0.2, grid);
    ASSERT_EQ(rows.size(), grid.size());
    const double unit =
        fidelity_closed_form(ProtocolId::qav2, 4, ChannelKind::amplitude_damping, 0.2);
    for (size_t i = 0; i < rows.size(); ++i) {
        EXPECT_NEAR(rows[i].correctness, 1.0 - std::pow(2.0, -grid[i]), 1e-12);
        EXPECT_NEAR(rows[i].fidelity, std::pow(unit, grid[i]), 1e-12);
        if (i > 0) {
            EXPECT_GT(rows[i].correctness, rows[i - 1].correctness);
            EXPECT_LT(rows[i].fidelity, rows[i - 1].fidelity);
        }
    }
    EXPECT_THROW(robustness_vs_correctness(ProtocolId::qav2, 4,
                                           ChannelKind::amplitude_damping, 0.2, {0}),
                 ConfigError);
}

TEST(Csv, SchemasArePinnedAndDeterministic) {
    const auto points = fidelity_sweep(ProtocolId::qav1, 3,
                                       ChannelKind::amplitude_damping, {0.0, 0.5});
    const auto fid = fidelity_csv(ProtocolId::qav1, ChannelKind::amplitude_damping,
                                  points);
    EXPECT_EQ(fid.substr(0, fid.find('\n')),
              "protocol,channel,eta,closed_form,numeric,abs_diff");
    EXPECT_EQ(fid, fidelity_csv(ProtocolId::qav1, ChannelKind::amplitude_damping,
                                points));

    const auto eff = efficiency_csv(efficiency_table(4));
    EXPECT_EQ(eff.substr(0, eff.find('\n')),
              "protocol,n,l,delta0,delta1,m,q,b,c,eta_num,eta_den");

    const auto base = lean(ProtocolId::qav2, 3, 4, 5);
    const auto suc = success_csv({success_probability_experiment(base, 1, 50)});
    EXPECT_EQ(suc.substr(0, suc.find('\n')),
              "protocol,n,k,l,trials,vetoes,aborts,rate,expected,sigma");

    const auto iter = iteration_csv(iteration_profile(ProtocolId::qav6, 3, 1));
    EXPECT_EQ(iter.substr(0, iter.find('\n')), "protocol,n,k,iterations");

    const auto trade = tradeoff_csv(
        ProtocolId::qav2, ChannelKind::phase_damping, 0.1,
        robustness_vs_correctness(ProtocolId::qav2, 3, ChannelKind::phase_damping, 0.1,
                                  {1, 2}));
    EXPECT_EQ(trade.substr(0, trade.find('\n')),
              "protocol,channel,eta,l,correctness,fidelity");
}
