#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qav/adversary/attack.hpp"
#include "qav/common/error.hpp"
#include "qav/primitives/keys.hpp"
#include "qav/primitives/qds.hpp"
#include "qav/primitives/transport.hpp"
#include "qav/primitives/world.hpp"
#include "qav/protocols/config.hpp"

namespace qav::proto::detail {

// Shared per-run state for all protocol bodies: the quantum world, the
// transcript, and the noise/decoy/attack wiring derived from the config.
struct Session {
    const ProtocolConfig& cfg;
    const VoteVector& votes;
    Rng& rng;
    prim::World world;
    Transcript log;
    qsim::KrausChannel noise;
    prim::DecoyPolicy decoys;
    std::unique_ptr<prim::ChannelTap> tap_impl;
    prim::TapPolicy tap;

    Session(const ProtocolConfig& cfg_in, const VoteVector& votes_in, Rng& rng_in);

    std::string voter(int i) const { return "V" + std::to_string(i); }

    // Voter i's vote in iteration `iteration`; a configured dishonest voter
    // alternates between iterations (the binding counterexample).
    int vote_of(int i, int iteration = 0) const;

    // Signature round per voter with the central authority; false on reject.
    bool authenticate();

    RunOutcome abort_outcome(const std::string& reason);
    RunOutcome finish(RunOutcome outcome);
};

// CA prepares `copies` n-qubit GHZ registers and sends voter i the i-th qubit
// of every copy in one decoy-protected batch. out[copy][voter] holds the
// handles; returns false when any batch aborts.
bool distribute_ghz(Session& s, int copies,
                    std::vector<std::vector<prim::Qubit>>& out);

// Diagonal-basis parity test on `check_count` randomly selected copies (the
// shared-correlation verification). Surviving copy indices land in
// `remaining` in random order. False when the error rate exceeds the
// threshold.
bool correlation_check(Session& s, std::vector<std::vector<prim::Qubit>>& copies,
                       int check_count, std::vector<int>& remaining);

std::string bits_string(const std::vector<int>& bits);

}  // namespace qav::proto::detail
