#pragma once

#include <string>
#include <vector>

#include "qav/qsim/rng.hpp"
#include "qav/qsim/state.hpp"

namespace qav::qsim {

enum class ChannelKind { identity, amplitude_damping, phase_damping };

// Single-qubit operator-sum channel {E_i}. The phase-damping E_1 here is the
// completeness-repaired diag(0, sqrt(eta)): the |1><0| form often quoted
// breaks sum_i E_i^dag E_i = I and is not trace preserving.
struct KrausChannel {
    ChannelKind kind = ChannelKind::identity;
    double eta = 0.0;
    std::vector<Matrix2cd> ops;

    // max-norm of sum_i E_i^dag E_i - I; ~0 for a valid channel.
    double completeness_defect() const;
    std::string name() const;
};

KrausChannel make_channel(ChannelKind kind, double eta);
ChannelKind channel_kind_from_name(const std::string& name);

// rho -> sum_i E_i rho E_i^dag on one target qubit.
void apply_channel(DensityOperator& rho, const KrausChannel& ch, int target);

// Trajectory sampling of the same channel on a pure state: picks E_i with
// probability ||E_i psi||^2 and renormalizes. Equal to apply_channel in
// distribution, which lets protocol runs stay on state vectors.
void apply_channel_stochastic(StateVector& psi, const KrausChannel& ch, int target,
                              Rng& rng);

}  // namespace qav::qsim
