#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qav/adversary/attack.hpp"
#include "qav/analysis/efficiency.hpp"
#include "qav/analysis/experiments.hpp"
#include "qav/analysis/fidelity.hpp"
#include "qav/common/error.hpp"
#include "qav/protocols/config.hpp"
#include "qav/protocols/run.hpp"
#include "qav/qsim/channel.hpp"
#include "qav/qsim/state.hpp"

namespace py = pybind11;

namespace {

using namespace qav;

// String-keyed mirror of ProtocolConfig so python callers never touch the
// C++ enums directly.
struct SimConfig {
    std::string protocol = "qav2";
    int voters = 4;
    int l = 10;
    double delta0 = 1.0;
    double delta1 = 1.0;
    double decoy_threshold = 0.0;
    double confirm_fraction = 0.1;
    std::string key_method;
    std::string state = "ghz";
    int m = 0;
    std::string noise = "identity";
    double eta = 0.0;
    std::string attack = "none";
    double beta2 = 0.0;
    double tap_probability = 1.0;
    bool qds = true;
    int qds_length = 32;
    double qds_threshold = 0.1;
    int dishonest_voter = -1;
    bool record_transcript = true;
    std::uint64_t seed = 0;

    proto::ProtocolConfig to_config() const {
        proto::ProtocolConfig cfg;
        cfg.id = proto::protocol_from_name(protocol);
        cfg.n = voters;
        cfg.l = l;
        cfg.delta0 = delta0;
        cfg.delta1 = delta1;
        cfg.decoy_threshold = decoy_threshold;
        cfg.key_confirm_fraction = confirm_fraction;
        if (!key_method.empty()) cfg.key_method = prim::key_method_from_name(key_method);
        cfg.state_kind = proto::state_kind_from_name(state);
        cfg.m = m;
        cfg.noise_kind = qsim::channel_kind_from_name(noise);
        cfg.noise_eta = eta;
        cfg.attack.kind = adv::attack_kind_from_name(attack);
        cfg.attack.beta2 = beta2;
        cfg.attack.tap_probability = tap_probability;
        cfg.qds.enabled = qds;
        cfg.qds.length = qds_length;
        cfg.qds.threshold = qds_threshold;
        cfg.dishonest_voter = dishonest_voter;
        cfg.record_transcript = record_transcript;
        cfg.seed = seed;
        proto::validate(cfg);
        return cfg;
    }
};

py::dict outcome_to_dict(const proto::RunOutcome& out) {
    py::dict d;
    d["result"] = out.result;
    d["conclusive"] = out.conclusive;
    d["confidence"] = out.confidence;
    d["iterations"] = out.iterations_used;
    d["aborted"] = out.aborted;
    d["abort_reason"] = out.abort_reason;
    py::list transcript;
    for (const proto::TranscriptRecord& r : out.transcript.records())
        transcript.append(py::make_tuple(r.sender, r.receiver, proto::rec_name(r.kind),
                                         proto::payload_digest(r.payload)));
    d["transcript"] = transcript;
    return d;
}

py::dict run_from_python(const SimConfig& pycfg, const std::string& votes) {
    const proto::ProtocolConfig cfg = pycfg.to_config();
    const proto::VoteVector v = proto::VoteVector::from_string(votes);
    if (v.n() != cfg.n)
        throw ConfigError("votes string length does not match the voter count");
    Rng rng(cfg.seed);
    return outcome_to_dict(proto::run_protocol(cfg, v, rng));
}

std::string random_votes(int n, int k, std::uint64_t seed) {
    Rng rng(seed);
    return proto::VoteVector::with_k(n, k, rng).str();
}

std::vector<std::complex<double>> state_amplitudes(const std::string& kind, int n) {
    if (kind == "ghz") {
        const auto psi = qsim::StateVector::ghz(n, qsim::kHardMaxQubits);
        return {psi.amplitudes().begin(), psi.amplitudes().end()};
    }
    if (kind == "bell") {
        const auto psi = qsim::StateVector::bell_phi_plus();
        return {psi.amplitudes().begin(), psi.amplitudes().end()};
    }
    if (kind == "cluster4") {
        const auto psi = qsim::StateVector::cluster4();
        return {psi.amplitudes().begin(), psi.amplitudes().end()};
    }
    if (kind == "bb84") {
        const auto psi = qsim::StateVector::bb84(n);
        return {psi.amplitudes().begin(), psi.amplitudes().end()};
    }
    throw ConfigError("unknown state kind '" + kind +
                      "'; expected ghz, bell, cluster4 or bb84");
}

std::vector<std::vector<std::vector<std::complex<double>>>> kraus_operators(
    const std::string& kind, double eta) {
    const qsim::KrausChannel ch =
        qsim::make_channel(qsim::channel_kind_from_name(kind), eta);
    std::vector<std::vector<std::vector<std::complex<double>>>> ops;
    for (const qsim::Matrix2cd& e : ch.ops)
        ops.push_back({{e(0, 0), e(0, 1)}, {e(1, 0), e(1, 1)}});
    return ops;
}

double fidelity_numeric(const std::string& protocol, int n, const std::string& channel,
                        double eta) {
    return analysis::average_fidelity_numeric(proto::protocol_from_name(protocol), n,
                                              qsim::channel_kind_from_name(channel), eta);
}

double fidelity_closed(const std::string& protocol, int n, const std::string& channel,
                       double eta) {
    return analysis::fidelity_closed_form(proto::protocol_from_name(protocol), n,
                                          qsim::channel_kind_from_name(channel), eta);
}

py::list fidelity_sweep_py(const std::string& protocol, int n, const std::string& channel,
                           const std::vector<double>& grid) {
    py::list rows;
    for (const analysis::FidelityPoint& p :
         analysis::fidelity_sweep(proto::protocol_from_name(protocol), n,
                                  qsim::channel_kind_from_name(channel), grid)) {
        py::dict d;
        d["eta"] = p.eta;
        d["closed_form"] = p.closed_form;
        d["numeric"] = p.numeric;
        d["abs_diff"] = p.abs_diff;
        rows.append(d);
    }
    return rows;
}

py::list efficiency_table_py(int n, int l_keys, int ring_l, int m) {
    py::list rows;
    for (const analysis::EfficiencyReport& row :
         analysis::efficiency_table(n, l_keys, analysis::Rational{1},
                                    analysis::Rational{1}, ring_l, m)) {
        py::dict d;
        d["protocol"] = proto::protocol_name(row.inputs.id);
        d["q"] = row.q;
        d["b"] = row.b;
        d["c"] = row.c;
        d["eta"] = py::make_tuple(row.eta.num, row.eta.den);
        d["eta_value"] = row.eta.value();
        rows.append(d);
    }
    return rows;
}

py::dict attack_experiment(const std::string& attack, double beta2,
                           double tap_probability, int decoys, int payload_bits,
                           const std::string& decoy_set, long long trials,
                           std::uint64_t seed) {
    adv::DetectionConfig cfg;
    cfg.attack.kind = adv::attack_kind_from_name(attack);
    cfg.attack.beta2 = beta2;
    cfg.attack.tap_probability = tap_probability;
    cfg.decoys_per_trial = decoys;
    cfg.payload_bits_per_trial = payload_bits;
    cfg.trials = trials;
    if (decoy_set == "all4") cfg.decoy_set = adv::DecoySet::all4;
    else if (decoy_set == "computational") cfg.decoy_set = adv::DecoySet::computational_only;
    else if (decoy_set == "diagonal") cfg.decoy_set = adv::DecoySet::diagonal_only;
    else throw ConfigError("unknown decoy set '" + decoy_set + "'");
    Rng rng(seed);
    const adv::AttackReport report = adv::detection_experiment(cfg, rng);
    py::dict d;
    d["trials"] = report.trials;
    d["detections"] = report.detections;
    d["decoy_units"] = report.decoy_units;
    d["decoy_errors"] = report.decoy_errors;
    d["per_decoy_error_rate"] = report.per_decoy_error_rate();
    d["run_detection_rate"] = report.run_detection_rate();
    d["payload_bits"] = report.payload_bits;
    d["payload_correct"] = report.payload_correct;
    d["info_proxy"] = report.info_proxy();
    return d;
}

py::dict success_experiment(const SimConfig& pycfg, int k, long long trials) {
    proto::ProtocolConfig cfg = pycfg.to_config();
    cfg.record_transcript = false;
    const analysis::SuccessResult res =
        analysis::success_probability_experiment(cfg, k, trials);
    py::dict d;
    d["protocol"] = proto::protocol_name(res.id);
    d["n"] = res.n;
    d["k"] = res.k;
    d["l"] = res.l;
    d["trials"] = res.trials;
    d["vetoes"] = res.vetoes;
    d["aborts"] = res.aborts;
    d["rate"] = res.rate();
    d["expected"] = res.expected();
    d["sigma"] = res.sigma();
    return d;
}

std::vector<int> iteration_profile_py(const std::string& protocol, int n,
                                      std::uint64_t seed) {
    return analysis::iteration_profile(proto::protocol_from_name(protocol), n, seed)
        .iterations;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Anonymous-veto protocol simulator core";

    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
    py::register_exception<InternalError>(mod, "InternalError", PyExc_RuntimeError);

    py::class_<SimConfig>(mod, "Config")
        .def(py::init<>())
        .def_readwrite("protocol", &SimConfig::protocol)
        .def_readwrite("voters", &SimConfig::voters)
        .def_readwrite("l", &SimConfig::l)
        .def_readwrite("delta0", &SimConfig::delta0)
        .def_readwrite("delta1", &SimConfig::delta1)
        .def_readwrite("decoy_threshold", &SimConfig::decoy_threshold)
        .def_readwrite("confirm_fraction", &SimConfig::confirm_fraction)
        .def_readwrite("key_method", &SimConfig::key_method)
        .def_readwrite("state", &SimConfig::state)
        .def_readwrite("m", &SimConfig::m)
        .def_readwrite("noise", &SimConfig::noise)
        .def_readwrite("eta", &SimConfig::eta)
        .def_readwrite("attack", &SimConfig::attack)
        .def_readwrite("beta2", &SimConfig::beta2)
        .def_readwrite("tap_probability", &SimConfig::tap_probability)
        .def_readwrite("qds", &SimConfig::qds)
        .def_readwrite("qds_length", &SimConfig::qds_length)
        .def_readwrite("qds_threshold", &SimConfig::qds_threshold)
        .def_readwrite("dishonest_voter", &SimConfig::dishonest_voter)
        .def_readwrite("record_transcript", &SimConfig::record_transcript)
        .def_readwrite("seed", &SimConfig::seed);

    mod.def("run", &run_from_python, py::arg("config"), py::arg("votes"),
            "Execute one protocol run; returns the outcome as a dict");
    mod.def("random_votes", &random_votes, py::arg("n"), py::arg("k"), py::arg("seed"),
            "Vote bitstring with k vetoes placed uniformly at random");
    mod.def("state_amplitudes", &state_amplitudes, py::arg("kind"), py::arg("n") = 0,
            "Amplitudes of ghz(n), bell, cluster4, or bb84 index n");
    mod.def("kraus_operators", &kraus_operators, py::arg("kind"), py::arg("eta"),
            "Operator-sum elements of a channel as nested 2x2 lists");
    mod.def("average_fidelity_numeric", &fidelity_numeric, py::arg("protocol"),
            py::arg("n"), py::arg("channel"), py::arg("eta"),
            "Density-operator average fidelity of the travelling state");
    mod.def("fidelity_closed_form", &fidelity_closed, py::arg("protocol"), py::arg("n"),
            py::arg("channel"), py::arg("eta"),
            "Closed-form average fidelity of the travelling state");
    mod.def("fidelity_sweep", &fidelity_sweep_py, py::arg("protocol"), py::arg("n"),
            py::arg("channel"), py::arg("grid"),
            "Closed-form and numeric fidelities over an eta grid");
    mod.def("efficiency_table", &efficiency_table_py, py::arg("n"),
            py::arg("l_keys") = 10, py::arg("ring_l") = 2, py::arg("m") = 3,
            "Qubit-cost rows with exact rational efficiencies");
    mod.def("attack_experiment", &attack_experiment, py::arg("attack"),
            py::arg("beta2") = 0.0, py::arg("tap_probability") = 1.0,
            py::arg("decoys") = 10, py::arg("payload_bits") = 0,
            py::arg("decoy_set") = "all4", py::arg("trials") = 1000, py::arg("seed") = 0,
            "Decoy detection and leakage statistics for a channel tap");
    mod.def("success_experiment", &success_experiment, py::arg("config"), py::arg("k"),
            py::arg("trials"),
            "Monte Carlo veto-detection rate with random vetoer placement");
    mod.def("iteration_profile", &iteration_profile_py, py::arg("protocol"),
            py::arg("n"), py::arg("seed") = 0,
            "Iterations used per vetoer count k = 0..n");
}
