#include <cmath>

#include "internal.hpp"
#include "qav/protocols/run.hpp"
#include "qav/qsim/gates.hpp"

namespace qav::proto {

RunOutcome run_rkqav(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng) {
    detail::Session s(cfg, votes, rng);
    const int n = cfg.n;
    const int check = static_cast<int>(std::ceil(cfg.delta0 * cfg.l));

    std::vector<std::vector<prim::Qubit>> copies;
    if (!detail::distribute_ghz(s, cfg.l + check, copies))
        return s.abort_outcome("decoy check failed");
    std::vector<int> remaining;
    if (!detail::correlation_check(s, copies, check, remaining))
        return s.abort_outcome("shared-state correlation failed");
    QAV_CHECK(static_cast<int>(remaining.size()) == cfg.l, "copy bookkeeping broken");

    const int cap = iteration_cap(n);
    RunOutcome out;
    for (int t = 0; t < cap; ++t) {
        const int copy = remaining[t];
        const qsim::Matrix2cd gate = qsim::phase_gate(t);
        for (int i = 0; i < n; ++i) {
            if (s.vote_of(i, t)) s.world.apply_1q(gate, copies[copy][i]);
            s.log.record(Rec::vote_encode, s.voter(i), "all", "");
        }
        for (int i = 0; i < n; ++i) {
            auto tr = prim::transmit(s.world, s.log, s.voter(i), "CA",
                                     {copies[copy][i]}, s.decoys, s.noise, s.tap,
                                     s.rng);
            if (tr.aborted) return s.abort_outcome("decoy check failed");
        }
        auto r = s.world.measure(qsim::Basis::ghz, copies[copy], s.rng);
        s.log.record(Rec::measure, "CA", "all",
                     "copy=" + std::to_string(copy) +
                         " outcome=" + std::to_string(r.outcome));
        out.iterations_used = t + 1;
        // The phase-flipped partner of the shared state signals an odd value
        // of k / 2^t, which pins the veto bit.
        if (r.outcome == (uint64_t{1} << (n - 1))) {
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
