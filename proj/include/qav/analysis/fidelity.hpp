#pragma once

#include <vector>

#include "qav/protocols/config.hpp"

namespace qav::analysis {

// Exact open-system average fidelity of one noise-bearing unit of a protocol,
// computed by density-operator evolution (one channel application per hop per
// travelling qubit, vote encodings interleaved between hops):
//   qav1            one prepared qubit, one hop; average over the four states
//   qav2/qav4/qav5  one shared Bell pair, one hop per half
//   qav3            one Bell pair; the travel half hops out, is dense-coded,
//                   and hops back; average over the four coding operations
//   qav6            one Bell pair; the travel half makes n+1 ring hops with
//                   the vote phases in between; average over all vote vectors
//   qav7            the default GHZ-row resource; its travel qubits make n+1
//                   ring hops with the vote words in between; vote average
// Throws ConfigError for protocols without a travelling-qubit noise model.
double average_fidelity_numeric(proto::ProtocolId id, int n, qsim::ChannelKind kind,
                                double eta);

// Published closed forms: qav1, qav2/qav4/qav5, qav3, and the four-voter
// qav6/qav7 rows, for the damping and dephasing channels. Throws ConfigError
// for any other combination. The qav3 form describes a different per-pair
// accounting than the simulated two-hop unit, so the two columns disagree by
// design; all other rows agree to numerical precision.
double fidelity_closed_form(proto::ProtocolId id, int n, qsim::ChannelKind kind,
                            double eta);

struct FidelityPoint {
    double eta = 0.0;
    double closed_form = 0.0;
    double numeric = 0.0;
    double abs_diff = 0.0;
};

// Both columns on a grid of channel parameters.
std::vector<FidelityPoint> fidelity_sweep(proto::ProtocolId id, int n,
                                          qsim::ChannelKind kind,
                                          const std::vector<double>& grid);

}  // namespace qav::analysis
