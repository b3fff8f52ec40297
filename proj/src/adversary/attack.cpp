#include "qav/adversary/attack.hpp"

#include <algorithm>
#include <cmath>

#include "qav/common/error.hpp"
#include "qav/qsim/gates.hpp"

namespace qav::adv {

AttackKind attack_kind_from_name(const std::string& name) {
    if (name == "none") return AttackKind::none;
    if (name == "intercept-resend") return AttackKind::intercept_resend;
    if (name == "entangle-measure") return AttackKind::entangle_measure;
    throw ConfigError("unknown attack kind: " + name);
}

const char* attack_kind_name(AttackKind kind) {
    switch (kind) {
        case AttackKind::none: return "none";
        case AttackKind::intercept_resend: return "intercept-resend";
        case AttackKind::entangle_measure: return "entangle-measure";
    }
    throw InternalError("unhandled attack kind");
}

void InterceptResendTap::on_qubit(prim::World& world, prim::Qubit q, Rng& rng) {
    int diagonal = rng.coin();
    auto basis = diagonal ? qsim::Basis::diagonal : qsim::Basis::computational;
    auto r = world.measure(basis, {q}, rng);
    records_.push_back({diagonal, static_cast<int>(r.outcome)});
}

EntangleMeasureTap::EntangleMeasureTap(double beta2) : beta2_(beta2) {
    QAV_CHECK(beta2 >= 0.0 && beta2 <= 1.0, "beta2 outside [0,1]");
}

void EntangleMeasureTap::on_qubit(prim::World& world, prim::Qubit q, Rng& rng) {
    (void)rng;
    qsim::StateVector anc(1);
    anc.amplitudes() << std::sqrt(1.0 - beta2_), std::sqrt(beta2_);
    prim::Qubit ancilla = world.append_ancilla(anc, q);
    world.apply_unitary(qsim::cnot(), {ancilla, q});
    ancillas_.push_back(ancilla);
}

std::vector<int> EntangleMeasureTap::measure_ancillas(prim::World& world, Rng& rng) {
    std::vector<int> bits;
    bits.reserve(ancillas_.size());
    for (prim::Qubit a : ancillas_)
        bits.push_back(static_cast<int>(
            world.measure(qsim::Basis::computational, {a}, rng).outcome));
    ancillas_.clear();
    return bits;
}

std::unique_ptr<prim::ChannelTap> make_tap(const AttackSpec& spec) {
    switch (spec.kind) {
        case AttackKind::none: return nullptr;
        case AttackKind::intercept_resend:
            return std::make_unique<InterceptResendTap>();
        case AttackKind::entangle_measure:
            return std::make_unique<EntangleMeasureTap>(spec.beta2);
    }
    throw InternalError("unhandled attack kind");
}

prim::TapPolicy tap_policy(const AttackSpec& spec, prim::ChannelTap* tap) {
    prim::TapPolicy policy;
    policy.tap = tap;
    policy.probability = spec.tap_probability;
    return policy;
}

double AttackReport::run_detection_rate() const {
    return trials > 0 ? static_cast<double>(detections) / trials : 0.0;
}

double AttackReport::per_decoy_error_rate() const {
    return decoy_units > 0 ? static_cast<double>(decoy_errors) / decoy_units : 0.0;
}

double AttackReport::info_proxy() const {
    if (payload_bits == 0) return 0.0;
    double acc = static_cast<double>(payload_correct) / payload_bits;
    return std::max(0.0, 2.0 * acc - 1.0);
}

namespace {

int draw_decoy_index(DecoySet set, Rng& rng) {
    switch (set) {
        case DecoySet::all4: return static_cast<int>(rng.uniform_below(4));
        case DecoySet::computational_only: return rng.coin();
        case DecoySet::diagonal_only: return 2 + rng.coin();
    }
    throw InternalError("unhandled decoy set");
}

}  // namespace

AttackReport detection_experiment(const DetectionConfig& cfg, Rng& rng) {
    if (cfg.trials < 1) throw ConfigError("detection experiment needs trials >= 1");
    if (cfg.decoys_per_trial < 0 || cfg.payload_bits_per_trial < 0)
        throw ConfigError("negative per-trial counts");

    AttackReport report;
    report.trials = cfg.trials;
    for (long long trial = 0; trial < cfg.trials; ++trial) {
        prim::World world;
        auto tap = make_tap(cfg.attack);
        auto policy = tap_policy(cfg.attack, tap.get());

        // Payload phase: Eve attacks every payload qubit; her guess for bit i
        // aligns with payload bit i.
        std::vector<int> payload(cfg.payload_bits_per_trial);
        std::vector<prim::Qubit> payload_qs;
        payload_qs.reserve(payload.size());
        for (int& bit : payload) {
            bit = rng.coin();
            payload_qs.push_back(world.add_qubit(qsim::StateVector::bb84(bit)));
        }
        std::vector<int> guesses;
        if (tap != nullptr && !payload_qs.empty()) {
            for (prim::Qubit q : payload_qs) tap->on_qubit(world, q, rng);
            if (auto* em = dynamic_cast<EntangleMeasureTap*>(tap.get())) {
                guesses = em->measure_ancillas(world, rng);
            } else if (auto* ir = dynamic_cast<InterceptResendTap*>(tap.get())) {
                for (const auto& rec : ir->records()) guesses.push_back(rec.outcome);
            }
        }
        QAV_CHECK(guesses.empty() || guesses.size() == payload.size(),
                  "guess/payload size mismatch");
        report.payload_bits += static_cast<long long>(guesses.size());
        for (size_t i = 0; i < guesses.size(); ++i)
            if (guesses[i] == payload[i]) ++report.payload_correct;

        // Decoy phase: each decoy is tapped with the configured probability
        // and then checked in its preparation basis.
        bool detected = false;
        for (int i = 0; i < cfg.decoys_per_trial; ++i) {
            int idx = draw_decoy_index(cfg.decoy_set, rng);
            prim::Qubit q = world.add_qubit(qsim::StateVector::bb84(idx));
            if (tap != nullptr &&
                (policy.probability >= 1.0 || rng.bernoulli(policy.probability)))
                tap->on_qubit(world, q, rng);
            auto basis =
                (idx >> 1) ? qsim::Basis::diagonal : qsim::Basis::computational;
            auto r = world.measure(basis, {q}, rng);
            ++report.decoy_units;
            if (static_cast<int>(r.outcome) != (idx & 1)) {
                ++report.decoy_errors;
                detected = true;
            }
        }
        if (detected) ++report.detections;
    }
    return report;
}

}  // namespace qav::adv
