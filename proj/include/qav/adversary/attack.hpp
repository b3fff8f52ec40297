#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qav/primitives/transport.hpp"

namespace qav::adv {

enum class AttackKind { none, intercept_resend, entangle_measure };

AttackKind attack_kind_from_name(const std::string& name);
const char* attack_kind_name(AttackKind kind);

struct AttackSpec {
    AttackKind kind = AttackKind::none;
    double beta2 = 0.0;           // |beta|^2 of the entangling ancilla
    double tap_probability = 1.0;  // fraction of in-flight qubits touched

    bool enabled() const { return kind != AttackKind::none; }
};

// Measures every tapped qubit in a random basis; the collapsed eigenstate is
// what travels onward. On a decoy prepared in the other basis the receiver
// sees an error with probability 1/2, i.e. 1/4 per decoy overall.
class InterceptResendTap : public prim::ChannelTap {
  public:
    struct Record {
        int diagonal;  // 1 when Eve measured in the diagonal basis
        int outcome;
    };

    void on_qubit(prim::World& world, prim::Qubit q, Rng& rng) override;
    const std::vector<Record>& records() const { return records_; }

  private:
    std::vector<Record> records_;
};

// Attaches an ancilla sqrt(1-beta2)|0> + sqrt(beta2)|1> as the control of a
// CNOT onto each tapped qubit. Diagonal-basis qubits stay separable (never
// detected); computational-basis qubits flip with probability beta2. The
// ancilla's reduced state is independent of a computational payload bit, so
// holding it buys Eve no inference advantage.
class EntangleMeasureTap : public prim::ChannelTap {
  public:
    explicit EntangleMeasureTap(double beta2);

    void on_qubit(prim::World& world, prim::Qubit q, Rng& rng) override;
    // Eve's readout: measures every held ancilla, in tap order.
    std::vector<int> measure_ancillas(prim::World& world, Rng& rng);

  private:
    double beta2_;
    std::vector<prim::Qubit> ancillas_;
};

// Concrete tap for an AttackSpec; null when the attack kind is none.
std::unique_ptr<prim::ChannelTap> make_tap(const AttackSpec& spec);
prim::TapPolicy tap_policy(const AttackSpec& spec, prim::ChannelTap* tap);

// Which decoy preparations the detection experiment draws from.
enum class DecoySet { all4, computational_only, diagonal_only };

struct DetectionConfig {
    AttackSpec attack;
    int decoys_per_trial = 10;
    int payload_bits_per_trial = 0;  // computational payload Eve tries to read
    DecoySet decoy_set = DecoySet::all4;
    long long trials = 1;
};

struct AttackReport {
    long long trials = 0;
    long long detections = 0;  // trials with at least one decoy error
    long long decoy_units = 0;
    long long decoy_errors = 0;
    long long payload_bits = 0;
    long long payload_correct = 0;

    double run_detection_rate() const;
    double per_decoy_error_rate() const;
    // Eve's guessing advantage max(0, 2*accuracy - 1) on payload bits.
    double info_proxy() const;
};

// Repeated decoy transmissions under one attack: per trial, sends a batch of
// decoys plus optional payload bits through the tap, then checks the decoys
// in their preparation bases and scores Eve's payload guesses.
AttackReport detection_experiment(const DetectionConfig& cfg, Rng& rng);

}  // namespace qav::adv
