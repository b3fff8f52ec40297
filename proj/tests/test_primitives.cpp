#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "qav/adversary/attack.hpp"
#include "qav/common/error.hpp"
#include "qav/primitives/keys.hpp"
#include "qav/primitives/qds.hpp"
#include "qav/primitives/transport.hpp"
#include "qav/primitives/world.hpp"

using namespace qav;
using namespace qav::prim;
using qsim::Basis;
using qsim::ChannelKind;
using qsim::StateVector;

TEST(World, RegisterRoundTrip) {
    World world;
    const std::vector<Qubit> reg = world.add_register(StateVector::ghz(3));
    ASSERT_EQ(reg.size(), 3u);
    EXPECT_EQ(world.register_count(), 1);
    EXPECT_EQ(world.register_size(reg[0]), 3);
    const StateVector back = world.register_state(reg[0]);
    EXPECT_NEAR(std::abs(back.inner_product(StateVector::ghz(3))), 1.0, 1e-10);
}

TEST(World, MeasurementCollapsesRegister) {
    World world;
    Rng rng(11);
    const std::vector<Qubit> reg = world.add_register(StateVector::ghz(4));
    const auto r = world.measure(Basis::computational, {reg[0]}, rng);
    for (const Qubit& q : reg)
        EXPECT_EQ(world.measure(Basis::computational, {q}, rng).outcome, r.outcome);
}

TEST(World, SingleQubitGateOnOneRegisterMember) {
    World world;
    Rng rng(13);
    const std::vector<Qubit> reg = world.add_register(StateVector::ghz(2));
    world.apply_1q(qsim::pauli_x(), reg[1]);
    const auto r = world.measure(Basis::bell, {reg[0], reg[1]}, rng);
    EXPECT_EQ(r.outcome, 1u);
}

TEST(World, ProjectOntoReference) {
    World world;
    Rng rng(17);
    const StateVector ref = StateVector::ghz(3);
    const std::vector<Qubit> reg = world.add_register(StateVector::ghz(3));
    EXPECT_TRUE(world.project_onto(ref, reg, rng));

    World world2;
    const std::vector<Qubit> reg2 = world2.add_register(StateVector::ghz(3));
    world2.apply_1q(qsim::pauli_x(), reg2[1]);
    EXPECT_FALSE(world2.project_onto(ref, reg2, rng));
}

TEST(Transport, NoiselessDeliveryKeepsPayloadIntact) {
    World world;
    proto::Transcript log(true);
    Rng rng(3);
    const std::vector<Qubit> reg = world.add_register(StateVector::ghz(2));
    DecoyPolicy decoys;
    decoys.ratio = 2.0;
    const TransmitResult res =
        transmit(world, log, "CA", "V0", {reg[0]}, decoys,
                 qsim::make_channel(ChannelKind::identity, 0.0), TapPolicy{}, rng);
    EXPECT_FALSE(res.aborted);
    EXPECT_EQ(res.decoy_errors, 0);
    EXPECT_GE(res.decoy_units, 2);
    Rng check(4);
    EXPECT_EQ(world.measure(Basis::bell, {reg[0], reg[1]}, check).outcome, 0u);
    EXPECT_GT(log.count(proto::Rec::qubits), 0);
    EXPECT_GT(log.count(proto::Rec::decoy_verdict), 0);
}

TEST(Transport, InterceptResendTriggersAbort) {
    adv::AttackSpec spec;
    spec.kind = adv::AttackKind::intercept_resend;
    const std::unique_ptr<ChannelTap> tap = adv::make_tap(spec);

    World world;
    proto::Transcript log(false);
    Rng rng(7);
    const std::vector<Qubit> reg = world.add_register(StateVector::ghz(2));
    DecoyPolicy decoys;
    decoys.ratio = 40.0;  // enough decoys that a miss is ~1e-5 likely
    const TransmitResult res =
        transmit(world, log, "CA", "V0", {reg[0]}, decoys,
                 qsim::make_channel(ChannelKind::identity, 0.0),
                 adv::tap_policy(spec, tap.get()), rng);
    EXPECT_TRUE(res.aborted);
    EXPECT_GT(res.decoy_errors, 0);
}

TEST(Transport, ThresholdToleratesReportedErrors) {
    adv::AttackSpec spec;
    spec.kind = adv::AttackKind::intercept_resend;
    const std::unique_ptr<ChannelTap> tap = adv::make_tap(spec);

    World world;
    proto::Transcript log(false);
    Rng rng(7);
    const std::vector<Qubit> reg = world.add_register(StateVector::ghz(2));
    DecoyPolicy decoys;
    decoys.ratio = 40.0;
    decoys.threshold = 1.0;
    const TransmitResult res =
        transmit(world, log, "CA", "V0", {reg[0]}, decoys,
                 qsim::make_channel(ChannelKind::identity, 0.0),
                 adv::tap_policy(spec, tap.get()), rng);
    EXPECT_FALSE(res.aborted);
    EXPECT_GT(res.error_rate, 0.0);
}

TEST(Transport, ZeroRatioSkipsDecoyCheck) {
    World world;
    proto::Transcript log(false);
    Rng rng(5);
    const std::vector<Qubit> reg = world.add_register(StateVector::ghz(2));
    const TransmitResult res =
        transmit(world, log, "CA", "V0", {reg[0]}, DecoyPolicy{0.0},
                 qsim::make_channel(ChannelKind::identity, 0.0), TapPolicy{}, rng);
    EXPECT_FALSE(res.aborted);
    EXPECT_EQ(res.decoy_units, 0);
}

TEST(Qds, HonestSignerAccepted) {
    const QdsParams params{64, 0.1};
    for (uint64_t seed = 0; seed < 20; ++seed) {
        World world;
        proto::Transcript log(false);
        Rng rng(seed);
        EXPECT_TRUE(qds_round(world, log, "V0", "CA", params, rng));
    }
}

TEST(Qds, ForgedClaimRejected) {
    // A forger who never saw the preparation record guesses all four states
    // uniformly; each guess lands on the eliminated state about 1/4 of the
    // time, far over a 10% threshold at length 64.
    const QdsParams params{64, 0.1};
    int rejections = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        World world;
        Rng rng(seed * 31 + 1);
        std::vector<Qubit> qubits;
        const QdsSignature real = qds_sign(world, qubits, params, rng);
        const QdsElimination elim = qds_receive(world, qubits, rng);
        std::vector<int> forged(params.length);
        for (int& v : forged) v = static_cast<int>(rng.uniform_below(4));
        const double mismatch = qds_mismatch(elim, forged);
        if (!qds_accept(params, mismatch)) ++rejections;
        EXPECT_TRUE(qds_accept(params, qds_mismatch(elim, real.indices)));
    }
    EXPECT_EQ(rejections, 20);
}

TEST(Qds, MismatchRateOfRandomGuessesNearQuarter) {
    const QdsParams params{256, 0.1};
    World world;
    Rng rng(99);
    std::vector<Qubit> qubits;
    qds_sign(world, qubits, params, rng);
    const QdsElimination elim = qds_receive(world, qubits, rng);
    std::vector<int> forged(params.length);
    for (int& v : forged) v = static_cast<int>(rng.uniform_below(4));
    const double mismatch = qds_mismatch(elim, forged);
    const double sigma = std::sqrt(0.25 * 0.75 / params.length);
    EXPECT_NEAR(mismatch, 0.25, 4.0 * sigma);
}

TEST(Keys, AllMethodsDeliverEqualKeys) {
    for (const KeyMethod method :
         {KeyMethod::bb84_qkd, KeyMethod::shared_bell, KeyMethod::orthogonal_qka,
          KeyMethod::semiquantum_mediated}) {
        for (uint64_t seed = 0; seed < 5; ++seed) {
            World world;
            proto::Transcript log(false);
            Rng rng(seed * 1000 + 77);
            KeyParams params;
            params.method = method;
            params.length = 16;
            params.decoys.ratio = 1.0;
            if (method == KeyMethod::orthogonal_qka)
                params.decoys.sub = DecoySub::gv_bell;
            const KeyResult key = establish_key(world, log, "V0", "V1", params, rng);
            ASSERT_FALSE(key.aborted) << key_method_name(method);
            ASSERT_EQ(key.a_bits.size(), 16u) << key_method_name(method);
            EXPECT_EQ(key.a_bits, key.b_bits) << key_method_name(method);
        }
    }
}

TEST(Keys, BitsLookBalanced) {
    World world;
    proto::Transcript log(false);
    Rng rng(123);
    KeyParams params;
    params.method = KeyMethod::shared_bell;
    params.length = 512;
    params.decoys.ratio = 0.0;
    const KeyResult key = establish_key(world, log, "V0", "V1", params, rng);
    ASSERT_FALSE(key.aborted);
    int ones = 0;
    for (const int b : key.a_bits) ones += b;
    const double sigma = std::sqrt(0.25 * 512.0);
    EXPECT_NEAR(static_cast<double>(ones), 256.0, 4.0 * sigma);
}

TEST(Keys, InterceptResendAbortsEstablishment) {
    adv::AttackSpec spec;
    spec.kind = adv::AttackKind::intercept_resend;
    const std::unique_ptr<ChannelTap> tap = adv::make_tap(spec);
    int aborts = 0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        World world;
        proto::Transcript log(false);
        Rng rng(seed + 5);
        KeyParams params;
        params.method = KeyMethod::bb84_qkd;
        params.length = 16;
        params.decoys.ratio = 2.0;
        params.tap = adv::tap_policy(spec, tap.get());
        if (establish_key(world, log, "V0", "V1", params, rng).aborted) ++aborts;
    }
    EXPECT_EQ(aborts, 10);
}

TEST(Transcript, RecordsAndDigestsAreStable) {
    proto::Transcript log(true);
    log.record(proto::Rec::broadcast, "V0", "all", "parity 0110");
    log.record(proto::Rec::verdict, "CA", "all", "veto");
    EXPECT_EQ(log.records().size(), 2u);
    EXPECT_EQ(log.count(proto::Rec::broadcast), 1);
    EXPECT_EQ(log.first_index(proto::Rec::verdict), 1);
    EXPECT_EQ(proto::payload_digest("parity 0110"), proto::payload_digest("parity 0110"));
    EXPECT_NE(proto::payload_digest("parity 0110"), proto::payload_digest("parity 0111"));
    const std::string lines = log.export_lines();
    EXPECT_NE(lines.find("broadcast"), std::string::npos);
    EXPECT_EQ(lines, log.export_lines());
}

TEST(Transcript, DisabledLogRecordsNothing) {
    proto::Transcript log(false);
    log.record(proto::Rec::note, "CA", "all", "ignored");
    EXPECT_TRUE(log.records().empty());
    EXPECT_EQ(log.first_index(proto::Rec::note), -1);
}
