#pragma once

#include "qav/protocols/config.hpp"

namespace qav::proto {

// Executes one full protocol run. Throws ConfigError on invalid input; abort
// paths (failed decoy checks, rejected signatures) come back in the outcome.
RunOutcome run_protocol(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng);

RunOutcome run_rkqav(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng);
RunOutcome run_wqav(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng);
// Pairwise-key parity layer shared by qav1..qav5.
RunOutcome run_xor_veto(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng);
RunOutcome run_qav6(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng);
RunOutcome run_qav7(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng);

// What a voter concludes from the announced mismatch bit of the
// travel-encoding scheme: 0 means either nobody or everybody vetoed, so the
// voter's own vote disambiguates.
int deduced_veto(int announced_c, int own_vote);

}  // namespace qav::proto
