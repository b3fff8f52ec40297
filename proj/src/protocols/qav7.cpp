#include <sstream>
#include <string>

#include "internal.hpp"
#include "qav/protocols/run.hpp"
#include "qav/protocols/subgroup.hpp"

namespace qav::proto {

// Travel-qubit scheme: the shared resource stays with the dealer except for
// the travel positions, which pass around the ring once. Vetoers apply their
// assigned word; the dealer then tests whether the resource still matches the
// initial state. A mismatch pins "some but not all vetoed"; voters fold in
// their own vote privately to settle the remaining two cases.
RunOutcome run_qav7(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng) {
    detail::Session s(cfg, votes, rng);
    if (!s.authenticate()) return s.abort_outcome("signature rejected");

    const int n = cfg.n;
    const SubgroupAssignment sub = assign_subgroups(n, cfg.state_kind, cfg.m, s.rng);
    const qsim::StateVector reference = subgroup_state(sub.state_kind, sub.m);
    const std::vector<prim::Qubit> reg = s.world.add_register(reference);
    std::vector<prim::Qubit> travel;
    travel.reserve(sub.travel.size());
    for (int pos : sub.travel) travel.push_back(reg[pos]);

    {
        std::ostringstream msg;
        msg << "m=" << sub.m << " travel=";
        for (size_t i = 0; i < sub.travel.size(); ++i)
            msg << (i ? "," : "") << sub.travel[i];
        msg << " ops=";
        for (size_t i = 0; i < sub.ops.size(); ++i)
            msg << (i ? "," : "") << sub.ops[i].str();
        s.log.record(Rec::note, "CA", "all", msg.str());
    }

    std::string holder = "CA";
    for (int i = 0; i < n; ++i) {
        auto tr = prim::transmit(s.world, s.log, holder, s.voter(i), travel,
                                 s.decoys, s.noise, s.tap, s.rng);
        if (tr.aborted) return s.abort_outcome("decoy check failed");
        if (s.vote_of(i)) s.world.apply_unitary(sub.ops[i].to_unitary(), travel);
        s.log.record(Rec::vote_encode, s.voter(i), "all", "");
        holder = s.voter(i);
    }
    auto tr = prim::transmit(s.world, s.log, holder, "CA", travel, s.decoys,
                             s.noise, s.tap, s.rng);
    if (tr.aborted) return s.abort_outcome("decoy check failed");

    const bool same = s.world.project_onto(reference, reg, s.rng);
    const int c = same ? 0 : 1;
    s.log.record(Rec::measure, "CA", "CA", same ? "match" : "mismatch");
    s.log.record(Rec::broadcast, "CA", "all", "C=" + std::to_string(c));

    RunOutcome out;
    out.result = c;
    out.conclusive = true;
    out.iterations_used = 1;
    s.log.record(Rec::verdict, "CA", "all", c ? "veto" : "consensus");
    return s.finish(std::move(out));
}

}  // namespace qav::proto
