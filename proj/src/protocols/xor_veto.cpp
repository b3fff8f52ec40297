#include <cmath>

#include "internal.hpp"
#include "qav/protocols/run.hpp"

namespace qav::proto {

namespace {

// One parity round: pairwise keys of `length` bits, per-voter parity
// announcements with vetoer coin flips, and the public XOR. False on abort.
bool parity_round(detail::Session& s, int length, int iteration,
                  std::vector<int>& s_bits) {
    const int n = s.cfg.n;
    prim::KeyParams kp;
    kp.method = effective_key_method(s.cfg);
    kp.length = length;
    kp.decoys = s.decoys;
    if (kp.method == prim::KeyMethod::orthogonal_qka)
        kp.decoys.sub = prim::DecoySub::gv_bell;
    kp.confirm_fraction = s.cfg.key_confirm_fraction;
    kp.noise = s.noise;
    kp.tap = s.tap;

    std::vector<std::vector<std::vector<int>>> view(
        n, std::vector<std::vector<int>>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            auto kr =
                prim::establish_key(s.world, s.log, s.voter(i), s.voter(j), kp, s.rng);
            if (kr.aborted) return false;
            view[i][j] = std::move(kr.a_bits);
            view[j][i] = std::move(kr.b_bits);
        }
    }

    s_bits.assign(length, 0);
    for (int i = 0; i < n; ++i) {
        std::vector<int> parity(length, 0);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int b = 0; b < length; ++b) parity[b] ^= view[i][j][b];
        }
        if (s.vote_of(i, iteration))
            for (int b = 0; b < length; ++b) parity[b] ^= s.rng.coin();
        s.log.record(Rec::vote_encode, s.voter(i), "all", "");
        s.log.record(Rec::broadcast, s.voter(i), "all",
                     "parity " + detail::bits_string(parity));
        for (int b = 0; b < length; ++b) s_bits[b] ^= parity[b];
    }
    s.log.record(Rec::verdict, "CA", "all", "S=" + detail::bits_string(s_bits));
    return true;
}

}  // namespace

RunOutcome run_xor_veto(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng) {
    detail::Session s(cfg, votes, rng);
    if (!s.authenticate()) return s.abort_outcome("signature rejected");

    RunOutcome out;
    if (cfg.id == ProtocolId::qav5) {
        // One-bit rounds until a veto shows or the round cap is spent.
        const int cap = cfg.l;
        for (int round = 0; round < cap; ++round) {
            std::vector<int> s_bits;
            if (!parity_round(s, 1, round, s_bits))
                return s.abort_outcome("key establishment aborted");
            out.iterations_used = round + 1;
            if (s_bits[0]) {
                out.result = 1;
                out.conclusive = true;
                s.log.record(Rec::verdict, "CA", "all", "veto");
                return s.finish(std::move(out));
            }
        }
        out.result = 0;
        out.conclusive = true;
        out.confidence = 1.0 - std::ldexp(1.0, -cap);
        s.log.record(Rec::verdict, "CA", "all", "consensus");
        return s.finish(std::move(out));
    }

    std::vector<int> s_bits;
    if (!parity_round(s, cfg.l, 0, s_bits))
        return s.abort_outcome("key establishment aborted");
    out.iterations_used = 1;
    out.conclusive = true;
    for (int bit : s_bits) out.result |= bit;
    out.confidence = out.result ? 1.0 : 1.0 - std::ldexp(1.0, -cfg.l);
    s.log.record(Rec::verdict, "CA", "all", out.result ? "veto" : "consensus");
    return s.finish(std::move(out));
}

}  // namespace qav::proto
