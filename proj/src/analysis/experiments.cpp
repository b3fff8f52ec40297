#include "qav/analysis/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qav/common/error.hpp"
#include "qav/common/parallel.hpp"
#include "qav/protocols/run.hpp"

namespace qav::analysis {

using proto::ProtocolId;

namespace {

bool is_parity_scheme(ProtocolId id) {
    switch (id) {
        case ProtocolId::wqav:
        case ProtocolId::qav1:
        case ProtocolId::qav2:
        case ProtocolId::qav3:
        case ProtocolId::qav4:
        case ProtocolId::qav5: return true;
        default: return false;
    }
}

std::string fmt(const char* spec, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, value);
    return buf;
}

}  // namespace

double SuccessResult::rate() const {
    return trials > 0 ? static_cast<double>(vetoes) / static_cast<double>(trials) : 0.0;
}

double SuccessResult::expected() const {
    if (k == 0) return 0.0;
    if (is_parity_scheme(id)) return 1.0 - std::ldexp(1.0, -l);
    return 1.0;
}

double SuccessResult::sigma() const {
    if (trials <= 0) return 0.0;
    const double p = expected();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

SuccessResult success_probability_experiment(const proto::ProtocolConfig& base, int k,
                                             long long trials) {
    if (trials < 1) throw ConfigError("experiment needs at least one trial");
    if (k < 0 || k > base.n) throw ConfigError("veto count outside 0..n");
    proto::validate(base);

    struct Counts {
        long long vetoes = 0;
        long long aborts = 0;
    };
    Counts counts = reduce_over_trials<Counts>(
        trials, Counts{},
        [&](long long t, Counts& acc) {
            Rng rng(base.seed ^ static_cast<uint64_t>(t));
            const proto::VoteVector votes = proto::VoteVector::with_k(base.n, k, rng);
            const proto::RunOutcome out = proto::run_protocol(base, votes, rng);
            if (out.aborted) ++acc.aborts;
            else if (out.result == 1) ++acc.vetoes;
        },
        [](Counts& a, const Counts& b) {
            a.vetoes += b.vetoes;
            a.aborts += b.aborts;
        });

    SuccessResult res;
    res.id = base.id;
    res.n = base.n;
    res.k = k;
    res.l = base.l;
    res.trials = trials;
    res.vetoes = counts.vetoes;
    res.aborts = counts.aborts;
    return res;
}

IterationProfile iteration_profile(ProtocolId id, int n, uint64_t seed) {
    if (id != ProtocolId::rkqav && id != ProtocolId::qav6)
        throw ConfigError("iteration profile applies to the iterative schemes only");
    proto::ProtocolConfig cfg;
    cfg.id = id;
    cfg.n = n;
    cfg.l = proto::iteration_cap(n);
    cfg.delta0 = 0.0;
    cfg.delta1 = 0.0;
    cfg.qds.enabled = false;
    cfg.record_transcript = false;
    cfg.seed = seed;

    IterationProfile profile;
    profile.id = id;
    profile.n = n;
    profile.iterations.resize(n + 1, 0);
    for (int k = 0; k <= n; ++k) {
        Rng rng(seed ^ (uint64_t{0x9e3779b97f4a7c15} * static_cast<uint64_t>(k + 1)));
        const proto::VoteVector votes = proto::VoteVector::with_k(n, k, rng);
        const proto::RunOutcome out = proto::run_protocol(cfg, votes, rng);
        QAV_CHECK(!out.aborted, "noiseless profile run aborted");
        profile.iterations[k] = out.iterations_used;
    }
    return profile;
}

std::vector<TradeoffRow> robustness_vs_correctness(ProtocolId id, int n,
                                                   qsim::ChannelKind kind, double eta,
                                                   const std::vector<int>& l_grid) {
    if (!is_parity_scheme(id))
        throw ConfigError("correctness trade-off applies to the parity schemes");
    std::vector<TradeoffRow> rows;
    rows.reserve(l_grid.size());
    const double base = fidelity_closed_form(id, n, kind, eta);
    for (int l : l_grid) {
        if (l < 1) throw ConfigError("trade-off grid needs l >= 1");
        TradeoffRow row;
        row.l = l;
        row.correctness = 1.0 - std::ldexp(1.0, -l);
        row.fidelity = std::pow(base, l);
        rows.push_back(row);
    }
    return rows;
}

std::string fidelity_csv(ProtocolId id, qsim::ChannelKind kind,
                         const std::vector<FidelityPoint>& points) {
    std::ostringstream out;
    out << "protocol,channel,eta,closed_form,numeric,abs_diff\n";
    const qsim::KrausChannel named = qsim::make_channel(kind, 0.0);
    for (const auto& p : points) {
        out << proto::protocol_name(id) << ',' << named.name() << ','
            << fmt("%.4f", p.eta) << ',' << fmt("%.12f", p.closed_form) << ','
            << fmt("%.12f", p.numeric) << ',' << fmt("%.3e", p.abs_diff) << '\n';
    }
    return out.str();
}

std::string efficiency_csv(const std::vector<EfficiencyReport>& rows) {
    std::ostringstream out;
    out << "protocol,n,l,delta0,delta1,m,q,b,c,eta_num,eta_den\n";
    for (const auto& r : rows) {
        const bool width_used = r.inputs.id == ProtocolId::qav7;
        out << proto::protocol_name(r.inputs.id) << ',' << r.inputs.n << ','
            << r.inputs.l << ',' << r.inputs.delta0.str() << ','
            << r.inputs.delta1.str() << ',' << (width_used ? r.inputs.m : 0) << ','
            << r.q << ',' << r.b << ',' << r.c << ',' << r.eta.num << ','
            << r.eta.den << '\n';
    }
    return out.str();
}

std::string success_csv(const std::vector<SuccessResult>& rows) {
    std::ostringstream out;
    out << "protocol,n,k,l,trials,vetoes,aborts,rate,expected,sigma\n";
    for (const auto& r : rows) {
        out << proto::protocol_name(r.id) << ',' << r.n << ',' << r.k << ',' << r.l
            << ',' << r.trials << ',' << r.vetoes << ',' << r.aborts << ','
            << fmt("%.6f", r.rate()) << ',' << fmt("%.6f", r.expected()) << ','
            << fmt("%.6f", r.sigma()) << '\n';
    }
    return out.str();
}

std::string attack_csv(const adv::DetectionConfig& cfg, const adv::AttackReport& report) {
    const char* set = cfg.decoy_set == adv::DecoySet::all4 ? "all4"
                      : cfg.decoy_set == adv::DecoySet::computational_only
                          ? "computational"
                          : "diagonal";
    std::ostringstream out;
    out << "attack,decoy_set,beta2,tap_probability,trials,decoy_units,decoy_errors,"
           "per_decoy_rate,run_detection_rate,payload_bits,payload_correct,"
           "info_proxy\n";
    out << adv::attack_kind_name(cfg.attack.kind) << ',' << set << ','
        << fmt("%.4f", cfg.attack.beta2) << ','
        << fmt("%.4f", cfg.attack.tap_probability) << ',' << report.trials << ','
        << report.decoy_units << ',' << report.decoy_errors << ','
        << fmt("%.6f", report.per_decoy_error_rate()) << ','
        << fmt("%.6f", report.run_detection_rate()) << ',' << report.payload_bits
        << ',' << report.payload_correct << ',' << fmt("%.6f", report.info_proxy())
        << '\n';
    return out.str();
}

std::string iteration_csv(const IterationProfile& profile) {
    std::ostringstream out;
    out << "protocol,n,k,iterations\n";
    for (size_t k = 0; k < profile.iterations.size(); ++k)
        out << proto::protocol_name(profile.id) << ',' << profile.n << ',' << k << ','
            << profile.iterations[k] << '\n';
    return out.str();
}

std::string tradeoff_csv(ProtocolId id, qsim::ChannelKind kind, double eta,
                         const std::vector<TradeoffRow>& rows) {
    std::ostringstream out;
    out << "protocol,channel,eta,l,correctness,fidelity\n";
    const qsim::KrausChannel named = qsim::make_channel(kind, 0.0);
    for (const auto& r : rows) {
        out << proto::protocol_name(id) << ',' << named.name() << ','
            << fmt("%.4f", eta) << ',' << r.l << ',' << fmt("%.12f", r.correctness)
            << ',' << fmt("%.12f", r.fidelity) << '\n';
    }
    return out.str();
}

}  // namespace qav::analysis
