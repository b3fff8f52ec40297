#include "qav/protocols/run.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "internal.hpp"

namespace qav::proto {

namespace detail {

Session::Session(const ProtocolConfig& cfg_in, const VoteVector& votes_in, Rng& rng_in)
    : cfg(cfg_in), votes(votes_in), rng(rng_in), log(cfg_in.record_transcript) {
    validate(cfg);
    if (votes.n() != cfg.n)
        throw ConfigError("vote vector length differs from voter count");
    noise = qsim::make_channel(cfg.noise_kind, cfg.noise_eta);
    decoys = {cfg.delta1, prim::DecoySub::bb84, cfg.decoy_threshold};
    tap_impl = adv::make_tap(cfg.attack);
    tap = adv::tap_policy(cfg.attack, tap_impl.get());

    std::ostringstream header;
    header << "protocol=" << protocol_name(cfg.id) << " n=" << cfg.n << " l=" << cfg.l
           << " delta0=" << cfg.delta0 << " delta1=" << cfg.delta1
           << " noise=" << noise.name() << " eta=" << cfg.noise_eta
           << " attack=" << adv::attack_kind_name(cfg.attack.kind)
           << " seed=" << cfg.seed;
    log.record(Rec::config, "harness", "all", header.str());
    log.record(Rec::votes, "harness", "harness", votes.str());
}

int Session::vote_of(int i, int iteration) const {
    int bit = votes.w[i];
    if (i == cfg.dishonest_voter && (iteration & 1)) bit ^= 1;
    return bit;
}

bool Session::authenticate() {
    if (!cfg.qds.enabled || cfg.id == ProtocolId::rkqav) return true;
    prim::QdsParams params{cfg.qds.length, cfg.qds.threshold};
    for (int i = 0; i < cfg.n; ++i) {
        if (!prim::qds_round(world, log, voter(i), "CA", params, rng)) {
            log.record(Rec::abort_event, "CA", "all",
                       "signature of " + voter(i) + " rejected");
            return false;
        }
    }
    return true;
}

RunOutcome Session::abort_outcome(const std::string& reason) {
    RunOutcome out;
    out.aborted = true;
    out.abort_reason = reason;
    out.conclusive = false;
    out.confidence = 0.0;
    return finish(std::move(out));
}

RunOutcome Session::finish(RunOutcome outcome) {
    outcome.transcript = std::move(log);
    return outcome;
}

bool distribute_ghz(Session& s, int copies,
                    std::vector<std::vector<prim::Qubit>>& out) {
    const int n = s.cfg.n;
    out.clear();
    out.reserve(copies);
    std::vector<std::vector<prim::Qubit>> per_voter(n);
    for (int c = 0; c < copies; ++c) {
        out.push_back(s.world.add_register(qsim::StateVector::ghz(n, qsim::kHardMaxQubits)));
        for (int i = 0; i < n; ++i) per_voter[i].push_back(out.back()[i]);
    }
    for (int i = 0; i < n; ++i) {
        auto tr = prim::transmit(s.world, s.log, "CA", s.voter(i), per_voter[i],
                                 s.decoys, s.noise, s.tap, s.rng);
        if (tr.aborted) return false;
    }
    return true;
}

bool correlation_check(Session& s, std::vector<std::vector<prim::Qubit>>& copies,
                       int check_count, std::vector<int>& remaining) {
    const int total = static_cast<int>(copies.size());
    QAV_CHECK(check_count >= 0 && check_count <= total, "bad check-copy count");
    std::vector<int> order(total);
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[s.rng.uniform_below(i)]);
    remaining.assign(order.begin() + check_count, order.end());
    if (check_count == 0) return true;

    {
        std::ostringstream msg;
        msg << "check-copies";
        for (int c = 0; c < check_count; ++c) msg << ' ' << order[c];
        s.log.record(Rec::broadcast, "CA", "all", msg.str());
    }
    int errors = 0;
    for (int c = 0; c < check_count; ++c) {
        const int copy = order[c];
        int parity = 0;
        std::ostringstream bits;
        for (int i = 0; i < s.cfg.n; ++i) {
            auto r = s.world.measure(qsim::Basis::diagonal, {copies[copy][i]}, s.rng);
            parity ^= static_cast<int>(r.outcome);
            bits << r.outcome;
        }
        s.log.record(Rec::announce, "all", "all",
                     "check copy=" + std::to_string(copy) + " bits=" + bits.str());
        if (parity != 0) ++errors;
    }
    double rate = static_cast<double>(errors) / check_count;
    bool ok = rate <= s.cfg.decoy_threshold;
    {
        std::ostringstream msg;
        msg << "correlation units=" << check_count << " errors=" << errors
            << (ok ? " ok" : " abort");
        s.log.record(Rec::decoy_verdict, "CA", "all", msg.str());
    }
    if (!ok)
        s.log.record(Rec::abort_event, "CA", "all", "shared-state correlation failed");
    return ok;
}

std::string bits_string(const std::vector<int>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (int b : bits) s.push_back(b ? '1' : '0');
    return s;
}

}  // namespace detail

int deduced_veto(int announced_c, int own_vote) {
    return (announced_c || own_vote) ? 1 : 0;
}

RunOutcome run_protocol(const ProtocolConfig& cfg, const VoteVector& votes, Rng& rng) {
    switch (cfg.id) {
        case ProtocolId::rkqav: return run_rkqav(cfg, votes, rng);
        case ProtocolId::wqav: return run_wqav(cfg, votes, rng);
        case ProtocolId::qav1:
        case ProtocolId::qav2:
        case ProtocolId::qav3:
        case ProtocolId::qav4:
        case ProtocolId::qav5: return run_xor_veto(cfg, votes, rng);
        case ProtocolId::qav6: return run_qav6(cfg, votes, rng);
        case ProtocolId::qav7: return run_qav7(cfg, votes, rng);
    }
    throw InternalError("unhandled protocol id");
}

}  // namespace qav::proto
