#pragma once

#include <string>
#include <vector>

#include "qav/primitives/world.hpp"
#include "qav/protocols/transcript.hpp"

namespace qav::prim {

// Decoy flavours: fresh BB84 singles checked in their preparation basis, or
// halves of |phi+> pairs checked by reuniting each pair in a Bell measurement.
enum class DecoySub { bb84, gv_bell };

struct DecoyPolicy {
    double ratio = 1.0;  // decoy qubits per payload qubit; 0 disables checking
    DecoySub sub = DecoySub::bb84;
    double threshold = 0.0;  // abort when error rate exceeds this
};

// Eavesdropping hook invoked per in-flight qubit. Implementations live in the
// adversary module; the transport layer only knows the interface.
class ChannelTap {
  public:
    virtual ~ChannelTap() = default;
    virtual void on_qubit(World& world, Qubit q, Rng& eve_rng) = 0;
};

struct TapPolicy {
    ChannelTap* tap = nullptr;
    double probability = 1.0;  // per-slot chance that Eve touches the qubit
};

struct TransmitResult {
    bool aborted = false;
    int decoy_units = 0;   // BB84 singles or Bell pairs, by subroutine
    int decoy_errors = 0;
    double error_rate = 0.0;
};

// Sends `payload` qubits from `sender` to `receiver`: interleaves fresh decoys
// at random positions, pushes every slot through the noise channel and the
// adversary tap, then runs the reveal-and-verify decoy check. The payload
// qubits themselves are untouched unless noise or Eve disturbs them.
// Transcript gets qubits/ack/reveal/decoy-verdict records.
TransmitResult transmit(World& world, proto::Transcript& log, const std::string& sender,
                        const std::string& receiver, const std::vector<Qubit>& payload,
                        const DecoyPolicy& decoys, const qsim::KrausChannel& noise,
                        const TapPolicy& tap, Rng& rng);

}  // namespace qav::prim
