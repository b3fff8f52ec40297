#include <string>

#include "internal.hpp"
#include "qav/protocols/run.hpp"
#include "qav/qsim/gates.hpp"

namespace qav::proto {

// Ring protocol: one Bell pair per iteration, the travel half visits every
// voter in order and returns to the dealer. Vetoers rotate the travel qubit;
// a phase-flipped pair at a conclusive iteration reveals the veto.
RunOutcome run_qav6(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng) {
    detail::Session s(cfg, votes, rng);
    if (!s.authenticate()) return s.abort_outcome("signature rejected");

    const int n = cfg.n;
    const int cap = iteration_cap(n);
    RunOutcome out;
    for (int t = 0; t < cap; ++t) {
        auto pair = s.world.add_register(qsim::StateVector::bell_phi_plus());
        const prim::Qubit home = pair[0];
        const prim::Qubit travel = pair[1];
        const qsim::Matrix2cd gate = qsim::phase_gate(t);

        std::string holder = "CA";
        for (int i = 0; i < n; ++i) {
            auto tr = prim::transmit(s.world, s.log, holder, s.voter(i), {travel},
                                     s.decoys, s.noise, s.tap, s.rng);
            if (tr.aborted) return s.abort_outcome("decoy check failed");
            if (s.vote_of(i, t)) s.world.apply_1q(gate, travel);
            s.log.record(Rec::vote_encode, s.voter(i), "all", "");
            holder = s.voter(i);
        }
        auto tr = prim::transmit(s.world, s.log, holder, "CA", {travel}, s.decoys,
                                 s.noise, s.tap, s.rng);
        if (tr.aborted) return s.abort_outcome("decoy check failed");

        auto r = s.world.measure(qsim::Basis::bell, {home, travel}, s.rng);
        s.log.record(Rec::measure, "CA", "all",
                     "t=" + std::to_string(t) +
                         " outcome=" + std::to_string(r.outcome));
        out.iterations_used = t + 1;
        // Outcome 2 is the phase-flipped pair, conclusive for an odd k / 2^t.
        if (r.outcome == 2) {
            out.result = 1;
            out.conclusive = true;
            s.log.record(Rec::verdict, "CA", "all", "veto");
            return s.finish(std::move(out));
        }
    }
    out.result = 0;
    out.conclusive = true;
    s.log.record(Rec::verdict, "CA", "all", "consensus");
    return s.finish(std::move(out));
}

}  // namespace qav::proto
