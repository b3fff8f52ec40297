#include <cmath>

#include "internal.hpp"
#include "qav/protocols/run.hpp"
#include "qav/qsim/gates.hpp"

namespace qav::proto {

RunOutcome run_wqav(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng) {
    detail::Session s(cfg, votes, rng);
    if (!s.authenticate()) return s.abort_outcome("signature rejected");
    const int n = cfg.n;
    const int l = cfg.l;

    prim::KeyParams kp;
    kp.method = effective_key_method(cfg);
    kp.length = l;
    kp.decoys = s.decoys;
    if (kp.method == prim::KeyMethod::orthogonal_qka)
        kp.decoys.sub = prim::DecoySub::gv_bell;
    kp.confirm_fraction = cfg.key_confirm_fraction;
    kp.noise = s.noise;
    kp.tap = s.tap;

    std::vector<std::vector<int>> mask_ca(n), mask_voter(n);
    for (int i = 0; i < n; ++i) {
        auto kr = prim::establish_key(s.world, s.log, "CA", s.voter(i), kp, s.rng);
        if (kr.aborted) return s.abort_outcome("key establishment aborted");
        mask_ca[i] = std::move(kr.a_bits);
        mask_voter[i] = std::move(kr.b_bits);
    }

    const int check = static_cast<int>(std::ceil(cfg.delta0 * l));
    std::vector<std::vector<prim::Qubit>> copies;
    if (!detail::distribute_ghz(s, l + check, copies))
        return s.abort_outcome("decoy check failed");
    std::vector<int> remaining;
    if (!detail::correlation_check(s, copies, check, remaining))
        return s.abort_outcome("shared-state correlation failed");

    // Vetoers flip the shared phase of each surviving copy with a fresh coin.
    for (int i = 0; i < n; ++i) {
        if (s.vote_of(i)) {
            for (int j = 0; j < l; ++j)
                if (s.rng.coin())
                    s.world.apply_1q(qsim::pauli_z(), copies[remaining[j]][i]);
        }
        s.log.record(Rec::vote_encode, s.voter(i), "all", "");
    }

    std::vector<int> result_bits(l, 0);
    for (int i = 0; i < n; ++i) {
        std::vector<int> masked(l);
        for (int j = 0; j < l; ++j) {
            prim::Qubit q = copies[remaining[j]][i];
            s.world.apply_1q(qsim::hadamard(), q);
            auto r = s.world.measure(qsim::Basis::computational, {q}, s.rng);
            masked[j] = static_cast<int>(r.outcome) ^ mask_voter[i][j];
        }
        s.log.record(Rec::broadcast, s.voter(i), "CA",
                     "masked " + detail::bits_string(masked));
        for (int j = 0; j < l; ++j) result_bits[j] ^= masked[j] ^ mask_ca[i][j];
    }
    s.log.record(Rec::verdict, "CA", "all", "R=" + detail::bits_string(result_bits));

    RunOutcome out;
    out.iterations_used = 1;
    out.conclusive = true;
    for (int bit : result_bits) out.result |= bit;
    out.confidence = out.result ? 1.0 : 1.0 - std::ldexp(1.0, -l);
    s.log.record(Rec::verdict, "CA", "all", out.result ? "veto" : "consensus");
    return s.finish(std::move(out));
}

}  // namespace qav::proto
