#include "cli/app.hpp"

#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qav/adversary/attack.hpp"
#include "qav/analysis/efficiency.hpp"
#include "qav/analysis/experiments.hpp"
#include "qav/analysis/fidelity.hpp"
#include "qav/common/error.hpp"
#include "qav/protocols/config.hpp"
#include "qav/protocols/run.hpp"

namespace qav::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitAborted = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInternal = 4;

std::string fmt(const char* spec, ...) {
    char buf[160];
    va_list args;
    va_start(args, spec);
    vsnprintf(buf, sizeof(buf), spec, args);
    va_end(args);
    return buf;
}

enum class Format { pretty, csv, structured_log };

Format format_from_name(const std::string& name) {
    if (name == "pretty") return Format::pretty;
    if (name == "csv") return Format::csv;
    if (name == "structured-log") return Format::structured_log;
    throw ConfigError("unknown format '" + name +
                      "'; expected pretty, csv or structured-log");
}

// One value that can arrive from the command line or from --config. The
// setter writes a JSON value into the bound variable; type mismatches in the
// file surface as ConfigError.
struct FileKeys {
    std::map<std::string, std::function<void(const json&)>> setters;
};

template <typename T>
void assign_from_json(T& var, const json& value, const std::string& key) {
    try {
        var = value.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

template <typename T>
CLI::Option* bind_option(CLI::App* cmd, FileKeys& keys, const std::string& name, T& var,
                         const std::string& desc) {
    CLI::Option* opt = cmd->add_option("--" + name, var, desc);
    keys.setters[name] = [&var, name](const json& v) { assign_from_json(var, v, name); };
    return opt;
}

CLI::Option* bind_toggle(CLI::App* cmd, FileKeys& keys, const std::string& name,
                         bool& var, const std::string& desc) {
    CLI::Option* opt = cmd->add_flag("--" + name + ",!--no-" + name, var, desc);
    keys.setters[name] = [&var, name](const json& v) { assign_from_json(var, v, name); };
    return opt;
}

// Applies a JSON config file underneath the parsed command line: every key
// must be known to the active subcommand, and keys given on the command line
// keep their command-line values. Returns the keys taken from the file.
std::set<std::string> apply_config_file(CLI::App* cmd, const FileKeys& keys,
                                        const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config file '" + path + "' must hold a JSON object");

    std::set<std::string> applied;
    for (const auto& [key, value] : doc.items()) {
        auto it = keys.setters.find(key);
        if (it == keys.setters.end())
            throw ConfigError("unknown config key '" + key + "' for command '" +
                              cmd->get_name() + "'");
        const CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt != nullptr && opt->count() > 0) continue;
        it->second(value);
        applied.insert(key);
    }
    return applied;
}

// Shared options: every command takes a mandatory seed (there is no ambient
// randomness source), an optional config file, an output path and a format.
struct CommonOpts {
    std::uint64_t seed = 0;
    std::string config_path;
    std::string output_path;  // empty writes to stdout
    std::string format_name = "pretty";

    CLI::Option* seed_opt = nullptr;
    CLI::Option* config_opt = nullptr;

    Format format() const { return format_from_name(format_name); }
};

void add_common(CLI::App* cmd, FileKeys& keys, CommonOpts& common) {
    common.seed_opt = bind_option(cmd, keys, "seed", common.seed,
                                  "Random seed (required; fixes every artifact byte)");
    common.config_opt =
        cmd->add_option("--config", common.config_path,
                        "JSON config file; command-line flags override its values");
    bind_option(cmd, keys, "output", common.output_path,
                "Output path (default: stdout)");
    bind_option(cmd, keys, "format", common.format_name,
                "Output format: pretty, csv or structured-log");
}

// Runs the file merge and the seed requirement for one subcommand.
void finish_common(CLI::App* cmd, const FileKeys& keys, CommonOpts& common) {
    std::set<std::string> from_file;
    if (!common.config_path.empty())
        from_file = apply_config_file(cmd, keys, common.config_path);
    if (common.seed_opt->count() == 0 && from_file.count("seed") == 0)
        throw ConfigError("--seed is required (pass it as a flag or a config key)");
    format_from_name(common.format_name);
}

void emit(const std::string& output_path, const std::string& text) {
    if (output_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output path '" + output_path + "'");
    out << text;
    out.close();
    if (!out) throw ConfigError("write failed for output path '" + output_path + "'");
}

std::string join_lines(const std::vector<ordered_json>& lines) {
    std::string text;
    for (const ordered_json& line : lines) {
        text += line.dump();
        text += '\n';
    }
    return text;
}

// The effective configuration goes to stderr so stdout stays a clean
// artifact stream.
void print_effective(const std::string& command,
                     const std::vector<std::pair<std::string, std::string>>& fields) {
    std::ostringstream out;
    out << "# effective config: command=" << command;
    for (const auto& [key, value] : fields) out << ' ' << key << '=' << value;
    out << '\n';
    std::cerr << out.str();
}

std::string trimmed_double(double value) { return fmt("%g", value); }

analysis::Rational parse_ratio(const std::string& text, const std::string& flag) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos)
            return analysis::Rational{std::stoll(text)};
        return analysis::Rational{std::stoll(text.substr(0, slash)),
                                  std::stoll(text.substr(slash + 1))};
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("expected an integer or a/b fraction for " + flag + ", got '" +
                          text + "'");
    }
}

// ---------------------------------------------------------------------------
// run

struct RunOpts {
    CommonOpts common;
    std::string protocol = "qav2";
    int voters = 4;
    int l = 10;
    double delta0 = 1.0;
    double delta1 = 1.0;
    double decoy_threshold = 0.0;
    double confirm_fraction = 0.1;
    std::string key_method;  // empty keeps the protocol's native method
    std::string state = "ghz";
    int m = 0;
    std::string noise = "identity";
    double eta = 0.0;
    std::string attack = "none";
    double beta2 = 0.0;
    double tap_probability = 1.0;
    std::string votes;
    int veto_count = -1;
    int dishonest_voter = -1;
    bool qds = true;
    int qds_length = 32;
    double qds_threshold = 0.1;
    std::string transcript_path;
    long long trials = 1;

    CLI::Option* votes_opt = nullptr;
    CLI::Option* veto_count_opt = nullptr;
};

void add_run_command(CLI::App& app, RunOpts& opts, FileKeys& keys) {
    CLI::App* cmd = app.add_subcommand(
        "run", "Execute one protocol run, or a success-rate experiment with --trials");
    add_common(cmd, keys, opts.common);
    bind_option(cmd, keys, "protocol", opts.protocol,
                "rkqav, wqav, qav1..qav5, qav6 or qav7");
    bind_option(cmd, keys, "voters", opts.voters, "Number of voters");
    bind_option(cmd, keys, "l", opts.l, "Key bits / copies / iteration budget");
    bind_option(cmd, keys, "delta0", opts.delta0,
                "Sacrificial check copies per payload copy");
    bind_option(cmd, keys, "delta1", opts.delta1, "Decoys per payload qubit per hop");
    bind_option(cmd, keys, "decoy-threshold", opts.decoy_threshold,
                "Tolerated decoy error rate before aborting");
    bind_option(cmd, keys, "confirm-fraction", opts.confirm_fraction,
                "Fraction of key bits sacrificed to confirmation");
    bind_option(cmd, keys, "key-method", opts.key_method,
                "bb84-qkd, shared-bell, orthogonal-qka or semiquantum-mediated");
    bind_option(cmd, keys, "state", opts.state,
                "Travel-encoding resource: bell, ghz or cluster4");
    bind_option(cmd, keys, "m", opts.m,
                "Travel-encoding register width (0 picks the table default)");
    bind_option(cmd, keys, "noise", opts.noise,
                "Channel on travelling qubits: identity, amplitude or phase");
    bind_option(cmd, keys, "eta", opts.eta, "Channel damping parameter in [0,1]");
    bind_option(cmd, keys, "attack", opts.attack,
                "none, intercept-resend or entangle-measure");
    bind_option(cmd, keys, "beta2", opts.beta2,
                "Entangling-probe coupling strength in [0,1]");
    bind_option(cmd, keys, "tap-probability", opts.tap_probability,
                "Chance the tap touches any given transmission");
    opts.votes_opt = bind_option(cmd, keys, "votes", opts.votes,
                                 "Vote bitstring, one 0/1 per voter");
    opts.veto_count_opt = bind_option(cmd, keys, "veto-count", opts.veto_count,
                                      "Number of vetoing voters, placed randomly");
    opts.votes_opt->excludes(opts.veto_count_opt);
    bind_option(cmd, keys, "dishonest-voter", opts.dishonest_voter,
                "Index of a voter that flips its vote every iteration (-1: none)");
    bind_toggle(cmd, keys, "qds", opts.qds, "Sign broadcasts with quantum signatures");
    bind_option(cmd, keys, "qds-length", opts.qds_length, "Signature key length");
    bind_option(cmd, keys, "qds-threshold", opts.qds_threshold,
                "Signature mismatch-rate acceptance threshold");
    bind_option(cmd, keys, "transcript", opts.transcript_path,
                "Write the full transcript export to this path");
    bind_option(cmd, keys, "trials", opts.trials,
                "Trials for a success-rate experiment (1: single run)");
}

proto::ProtocolConfig build_protocol_config(const RunOpts& opts) {
    proto::ProtocolConfig cfg;
    cfg.id = proto::protocol_from_name(opts.protocol);
    cfg.n = opts.voters;
    cfg.l = opts.l;
    cfg.delta0 = opts.delta0;
    cfg.delta1 = opts.delta1;
    cfg.decoy_threshold = opts.decoy_threshold;
    cfg.key_confirm_fraction = opts.confirm_fraction;
    if (!opts.key_method.empty())
        cfg.key_method = prim::key_method_from_name(opts.key_method);
    cfg.state_kind = proto::state_kind_from_name(opts.state);
    cfg.m = opts.m;
    cfg.noise_kind = qsim::channel_kind_from_name(opts.noise);
    cfg.noise_eta = opts.eta;
    cfg.attack.kind = adv::attack_kind_from_name(opts.attack);
    cfg.attack.beta2 = opts.beta2;
    cfg.attack.tap_probability = opts.tap_probability;
    cfg.qds.enabled = opts.qds;
    cfg.qds.length = opts.qds_length;
    cfg.qds.threshold = opts.qds_threshold;
    cfg.dishonest_voter = opts.dishonest_voter;
    cfg.seed = opts.common.seed;
    return cfg;
}

bool takes_key_method(proto::ProtocolId id) {
    return id == proto::ProtocolId::wqav ||
           (id >= proto::ProtocolId::qav1 && id <= proto::ProtocolId::qav5);
}

std::vector<std::pair<std::string, std::string>> run_effective_fields(
    const RunOpts& opts, const proto::ProtocolConfig& cfg, const std::string& votes) {
    const std::string key_method =
        takes_key_method(cfg.id) ? prim::key_method_name(proto::effective_key_method(cfg))
                                 : "-";
    return {
        {"protocol", proto::protocol_name(cfg.id)},
        {"voters", std::to_string(cfg.n)},
        {"l", std::to_string(cfg.l)},
        {"delta0", trimmed_double(cfg.delta0)},
        {"delta1", trimmed_double(cfg.delta1)},
        {"decoy-threshold", trimmed_double(cfg.decoy_threshold)},
        {"confirm-fraction", trimmed_double(cfg.key_confirm_fraction)},
        {"key-method", key_method},
        {"state", proto::state_kind_name(cfg.state_kind)},
        {"m", std::to_string(cfg.m)},
        {"noise", qsim::make_channel(cfg.noise_kind, cfg.noise_eta).name()},
        {"eta", trimmed_double(cfg.noise_eta)},
        {"attack", adv::attack_kind_name(cfg.attack.kind)},
        {"beta2", trimmed_double(cfg.attack.beta2)},
        {"tap-probability", trimmed_double(cfg.attack.tap_probability)},
        {"votes", votes},
        {"dishonest-voter", std::to_string(cfg.dishonest_voter)},
        {"qds", cfg.qds.enabled ? "on" : "off"},
        {"trials", std::to_string(opts.trials)},
        {"seed", std::to_string(cfg.seed)},
        {"format", opts.common.format_name},
        {"output", opts.common.output_path.empty() ? "-" : opts.common.output_path},
    };
}

std::string verdict_word(const proto::RunOutcome& out) {
    if (out.aborted) return "ABORTED(" + out.abort_reason + ")";
    return out.result == 1 ? "VETO" : "CONSENSUS";
}

ordered_json outcome_record(const proto::RunOutcome& out) {
    ordered_json rec;
    rec["record"] = "outcome";
    rec["verdict"] = verdict_word(out);
    rec["result"] = out.result;
    rec["conclusive"] = out.conclusive;
    rec["confidence"] = out.confidence;
    rec["iterations"] = out.iterations_used;
    rec["aborted"] = out.aborted;
    rec["abort_reason"] = out.abort_reason;
    return rec;
}

int run_single(const RunOpts& opts, const proto::ProtocolConfig& cfg,
               const proto::VoteVector& votes) {
    Rng rng(cfg.seed);
    const proto::RunOutcome out = proto::run_protocol(cfg, votes, rng);

    if (!opts.transcript_path.empty())
        emit(opts.transcript_path, out.transcript.export_lines());

    switch (opts.common.format()) {
        case Format::pretty:
            emit(opts.common.output_path, verdict_word(out) + "\n");
            break;
        case Format::csv: {
            std::string text =
                "protocol,n,l,seed,result,conclusive,confidence,iterations,aborted,"
                "abort_reason\n";
            text += fmt("%s,%d,%d,%llu,%d,%d,%.6f,%d,%d,%s\n", proto::protocol_name(cfg.id),
                        cfg.n, cfg.l, static_cast<unsigned long long>(cfg.seed), out.result,
                        out.conclusive ? 1 : 0, out.confidence, out.iterations_used,
                        out.aborted ? 1 : 0, out.abort_reason.c_str());
            emit(opts.common.output_path, text);
            break;
        }
        case Format::structured_log: {
            std::vector<ordered_json> lines;
            ordered_json head;
            head["record"] = "config";
            head["command"] = "run";
            for (const auto& [key, value] : run_effective_fields(opts, cfg, votes.str())) {
                if (key == "format" || key == "output") continue;
                head[key] = value;
            }
            lines.push_back(head);
            for (std::size_t i = 0; i < out.transcript.records().size(); ++i) {
                const proto::TranscriptRecord& r = out.transcript.records()[i];
                ordered_json line;
                line["record"] = "transcript";
                line["seq"] = i;
                line["sender"] = r.sender;
                line["receiver"] = r.receiver;
                line["kind"] = proto::rec_name(r.kind);
                line["digest"] = proto::payload_digest(r.payload);
                lines.push_back(line);
            }
            lines.push_back(outcome_record(out));
            emit(opts.common.output_path, join_lines(lines));
            break;
        }
    }
    return out.aborted ? kExitAborted : kExitOk;
}

int run_experiment(const RunOpts& opts, proto::ProtocolConfig cfg, int k) {
    cfg.record_transcript = false;
    const analysis::SuccessResult res =
        analysis::success_probability_experiment(cfg, k, opts.trials);

    switch (opts.common.format()) {
        case Format::pretty: {
            const double sigma = res.sigma();
            const double pull =
                sigma > 0.0 ? (res.rate() - res.expected()) / sigma : 0.0;
            emit(opts.common.output_path,
                 fmt("%s n=%d k=%d l=%d: veto rate %.5f over %lld trials "
                     "(expected %.5f, %.1f sigma), %lld aborts\n",
                     proto::protocol_name(res.id), res.n, res.k, res.l, res.rate(),
                     res.trials, res.expected(), pull, res.aborts));
            break;
        }
        case Format::csv:
            emit(opts.common.output_path, analysis::success_csv({res}));
            break;
        case Format::structured_log: {
            std::vector<ordered_json> lines;
            ordered_json head;
            head["record"] = "config";
            head["command"] = "run";
            for (const auto& [key, value] :
                 run_effective_fields(opts, cfg, "k=" + std::to_string(k))) {
                if (key == "format" || key == "output") continue;
                head[key] = value;
            }
            lines.push_back(head);
            ordered_json rec;
            rec["record"] = "success";
            rec["protocol"] = proto::protocol_name(res.id);
            rec["n"] = res.n;
            rec["k"] = res.k;
            rec["l"] = res.l;
            rec["trials"] = res.trials;
            rec["vetoes"] = res.vetoes;
            rec["aborts"] = res.aborts;
            rec["rate"] = res.rate();
            rec["expected"] = res.expected();
            rec["sigma"] = res.sigma();
            lines.push_back(rec);
            emit(opts.common.output_path, join_lines(lines));
            break;
        }
    }
    return kExitOk;
}

int handle_run(CLI::App* cmd, const FileKeys& keys, RunOpts& opts) {
    finish_common(cmd, keys, opts.common);
    proto::ProtocolConfig cfg = build_protocol_config(opts);

    const bool have_votes = !opts.votes.empty();
    const bool have_k = opts.veto_count >= 0;
    if (have_votes && have_k)
        throw ConfigError("--votes and --veto-count are mutually exclusive");
    if (!have_votes && !have_k)
        throw ConfigError("provide the votes: --votes <bits> or --veto-count <k>");

    if (opts.trials < 1) throw ConfigError("--trials must be >= 1");
    if (opts.trials > 1) {
        if (!have_k)
            throw ConfigError(
                "--trials > 1 redraws vetoer placement each trial; use --veto-count");
        if (!opts.transcript_path.empty())
            throw ConfigError("--transcript only applies to a single run (--trials 1)");
        proto::validate(cfg);
        print_effective("run", run_effective_fields(
                                   opts, cfg, "k=" + std::to_string(opts.veto_count)));
        return run_experiment(opts, cfg, opts.veto_count);
    }

    Rng vote_rng(cfg.seed ^ 0x5eedULL);
    const proto::VoteVector votes =
        have_votes ? proto::VoteVector::from_string(opts.votes)
                   : proto::VoteVector::with_k(cfg.n, opts.veto_count, vote_rng);
    if (votes.n() != cfg.n)
        throw ConfigError(fmt("--votes has %d bits but there are %d voters", votes.n(),
                              cfg.n));
    proto::validate(cfg);
    print_effective("run", run_effective_fields(opts, cfg, votes.str()));
    return run_single(opts, cfg, votes);
}

// ---------------------------------------------------------------------------
// sweep-noise

struct SweepOpts {
    CommonOpts common;
    std::string protocol = "qav2";
    int voters = 4;
    std::string channel = "amplitude";
    double eta_min = 0.0;
    double eta_max = 0.95;
    double eta_step = 0.05;
};

void add_sweep_command(CLI::App& app, SweepOpts& opts, FileKeys& keys) {
    CLI::App* cmd = app.add_subcommand(
        "sweep-noise", "Closed-form vs numeric state fidelity over a damping grid");
    add_common(cmd, keys, opts.common);
    bind_option(cmd, keys, "protocol", opts.protocol,
                "qav1..qav5, qav6 or qav7 (schemes with travelling qubits)");
    bind_option(cmd, keys, "voters", opts.voters, "Number of voters");
    bind_option(cmd, keys, "channel", opts.channel, "amplitude or phase");
    bind_option(cmd, keys, "eta-min", opts.eta_min, "Grid start");
    bind_option(cmd, keys, "eta-max", opts.eta_max, "Grid end (inclusive)");
    bind_option(cmd, keys, "eta-step", opts.eta_step, "Grid step");
}

std::vector<double> eta_grid(double lo, double hi, double step) {
    if (step <= 0.0) throw ConfigError("--eta-step must be > 0");
    if (lo > hi) throw ConfigError("--eta-min must not exceed --eta-max");
    if (lo < 0.0 || hi > 1.0) throw ConfigError("eta grid must stay inside [0,1]");
    std::vector<double> grid;
    const int count = static_cast<int>((hi - lo) / step + 1e-9) + 1;
    for (int i = 0; i < count; ++i) grid.push_back(lo + i * step);
    return grid;
}

int handle_sweep(CLI::App* cmd, const FileKeys& keys, SweepOpts& opts) {
    finish_common(cmd, keys, opts.common);
    const proto::ProtocolId id = proto::protocol_from_name(opts.protocol);
    const qsim::ChannelKind kind = qsim::channel_kind_from_name(opts.channel);
    if (kind == qsim::ChannelKind::identity)
        throw ConfigError("pick a damping channel: amplitude or phase");
    const std::vector<double> grid =
        eta_grid(opts.eta_min, opts.eta_max, opts.eta_step);

    print_effective("sweep-noise",
                    {{"protocol", proto::protocol_name(id)},
                     {"voters", std::to_string(opts.voters)},
                     {"channel", opts.channel},
                     {"eta-min", trimmed_double(opts.eta_min)},
                     {"eta-max", trimmed_double(opts.eta_max)},
                     {"eta-step", trimmed_double(opts.eta_step)},
                     {"seed", std::to_string(opts.common.seed)},
                     {"format", opts.common.format_name},
                     {"output",
                      opts.common.output_path.empty() ? "-" : opts.common.output_path}});

    const std::vector<analysis::FidelityPoint> points =
        analysis::fidelity_sweep(id, opts.voters, kind, grid);

    switch (opts.common.format()) {
        case Format::pretty: {
            std::string text = fmt("%s fidelity under the %s channel (%d voters)\n",
                                   proto::protocol_name(id), opts.channel.c_str(),
                                   opts.voters);
            for (const analysis::FidelityPoint& p : points)
                text += fmt("  eta=%.4f closed=%.12f numeric=%.12f |diff|=%.3e\n", p.eta,
                            p.closed_form, p.numeric, p.abs_diff);
            emit(opts.common.output_path, text);
            break;
        }
        case Format::csv:
            emit(opts.common.output_path, analysis::fidelity_csv(id, kind, points));
            break;
        case Format::structured_log: {
            std::vector<ordered_json> lines;
            ordered_json head;
            head["record"] = "config";
            head["command"] = "sweep-noise";
            head["protocol"] = proto::protocol_name(id);
            head["voters"] = opts.voters;
            head["channel"] = opts.channel;
            head["seed"] = opts.common.seed;
            lines.push_back(head);
            for (const analysis::FidelityPoint& p : points) {
                ordered_json line;
                line["record"] = "fidelity";
                line["eta"] = p.eta;
                line["closed_form"] = p.closed_form;
                line["numeric"] = p.numeric;
                line["abs_diff"] = p.abs_diff;
                lines.push_back(line);
            }
            emit(opts.common.output_path, join_lines(lines));
            break;
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// efficiency-table

struct EfficiencyOpts {
    CommonOpts common;
    int voters = 4;
    int l = 10;
    std::string delta0 = "1";
    std::string delta1 = "1";
    int ring_l = 2;
    int m = 3;
};

void add_efficiency_command(CLI::App& app, EfficiencyOpts& opts, FileKeys& keys) {
    CLI::App* cmd = app.add_subcommand(
        "efficiency-table", "Qubit-cost table with exact per-protocol efficiencies");
    add_common(cmd, keys, opts.common);
    bind_option(cmd, keys, "voters", opts.voters, "Number of voters");
    bind_option(cmd, keys, "l", opts.l, "Key bits for the key-based rows");
    bind_option(cmd, keys, "delta0", opts.delta0,
                "Check-copy ratio, integer or a/b fraction");
    bind_option(cmd, keys, "delta1", opts.delta1,
                "Decoy ratio, integer or a/b fraction");
    bind_option(cmd, keys, "ring-l", opts.ring_l, "Iteration budget of the ring row");
    bind_option(cmd, keys, "m", opts.m, "Register width of the travel-encoding row");
}

int handle_efficiency(CLI::App* cmd, const FileKeys& keys, EfficiencyOpts& opts) {
    finish_common(cmd, keys, opts.common);
    const analysis::Rational d0 = parse_ratio(opts.delta0, "--delta0");
    const analysis::Rational d1 = parse_ratio(opts.delta1, "--delta1");

    print_effective("efficiency-table",
                    {{"voters", std::to_string(opts.voters)},
                     {"l", std::to_string(opts.l)},
                     {"delta0", d0.str()},
                     {"delta1", d1.str()},
                     {"ring-l", std::to_string(opts.ring_l)},
                     {"m", std::to_string(opts.m)},
                     {"seed", std::to_string(opts.common.seed)},
                     {"format", opts.common.format_name},
                     {"output",
                      opts.common.output_path.empty() ? "-" : opts.common.output_path}});

    const std::vector<analysis::EfficiencyReport> rows =
        analysis::efficiency_table(opts.voters, opts.l, d0, d1, opts.ring_l, opts.m);

    switch (opts.common.format()) {
        case Format::pretty: {
            std::string text = fmt("qubit efficiency, %d voters\n", opts.voters);
            for (const analysis::EfficiencyReport& row : rows)
                text += fmt("  %-6s q=%-6lld b=%-4lld c=%lld  eta=%s = %.6f\n",
                            proto::protocol_name(row.inputs.id), row.q, row.b, row.c,
                            row.eta.str().c_str(), row.eta.value());
            emit(opts.common.output_path, text);
            break;
        }
        case Format::csv:
            emit(opts.common.output_path, analysis::efficiency_csv(rows));
            break;
        case Format::structured_log: {
            std::vector<ordered_json> lines;
            ordered_json head;
            head["record"] = "config";
            head["command"] = "efficiency-table";
            head["voters"] = opts.voters;
            head["l"] = opts.l;
            head["delta0"] = d0.str();
            head["delta1"] = d1.str();
            head["ring-l"] = opts.ring_l;
            head["m"] = opts.m;
            lines.push_back(head);
            for (const analysis::EfficiencyReport& row : rows) {
                ordered_json line;
                line["record"] = "efficiency";
                line["protocol"] = proto::protocol_name(row.inputs.id);
                line["q"] = row.q;
                line["b"] = row.b;
                line["c"] = row.c;
                line["eta"] = row.eta.str();
                line["eta_value"] = row.eta.value();
                lines.push_back(line);
            }
            emit(opts.common.output_path, join_lines(lines));
            break;
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// attack-sim

struct AttackOpts {
    CommonOpts common;
    std::string attack = "intercept-resend";
    double beta2 = 0.0;
    double tap_probability = 1.0;
    int decoys = 10;
    int payload_bits = 0;
    std::string decoy_set = "all4";
    long long trials = 1000;
};

void add_attack_command(CLI::App& app, AttackOpts& opts, FileKeys& keys) {
    CLI::App* cmd = app.add_subcommand(
        "attack-sim", "Decoy detection and leakage statistics for a channel tap");
    add_common(cmd, keys, opts.common);
    bind_option(cmd, keys, "attack", opts.attack,
                "intercept-resend or entangle-measure");
    bind_option(cmd, keys, "beta2", opts.beta2,
                "Entangling-probe coupling strength in [0,1]");
    bind_option(cmd, keys, "tap-probability", opts.tap_probability,
                "Chance the tap touches any given transmission");
    bind_option(cmd, keys, "decoys", opts.decoys, "Decoy qubits per trial");
    bind_option(cmd, keys, "payload-bits", opts.payload_bits,
                "Computational payload bits per trial the tap tries to read");
    bind_option(cmd, keys, "decoy-set", opts.decoy_set,
                "Decoy preparations: all4, computational or diagonal");
    bind_option(cmd, keys, "trials", opts.trials, "Number of independent trials");
}

adv::DecoySet decoy_set_from_name(const std::string& name) {
    if (name == "all4") return adv::DecoySet::all4;
    if (name == "computational") return adv::DecoySet::computational_only;
    if (name == "diagonal") return adv::DecoySet::diagonal_only;
    throw ConfigError("unknown decoy set '" + name +
                      "'; expected all4, computational or diagonal");
}

int handle_attack(CLI::App* cmd, const FileKeys& keys, AttackOpts& opts) {
    finish_common(cmd, keys, opts.common);
    adv::DetectionConfig cfg;
    cfg.attack.kind = adv::attack_kind_from_name(opts.attack);
    if (cfg.attack.kind == adv::AttackKind::none)
        throw ConfigError("pick an attack: intercept-resend or entangle-measure");
    cfg.attack.beta2 = opts.beta2;
    cfg.attack.tap_probability = opts.tap_probability;
    cfg.decoys_per_trial = opts.decoys;
    cfg.payload_bits_per_trial = opts.payload_bits;
    cfg.decoy_set = decoy_set_from_name(opts.decoy_set);
    cfg.trials = opts.trials;
    if (cfg.decoys_per_trial < 1) throw ConfigError("--decoys must be >= 1");
    if (cfg.payload_bits_per_trial < 0) throw ConfigError("--payload-bits must be >= 0");
    if (cfg.trials < 1) throw ConfigError("--trials must be >= 1");
    if (cfg.attack.beta2 < 0.0 || cfg.attack.beta2 > 1.0)
        throw ConfigError("--beta2 must lie in [0,1]");
    if (cfg.attack.tap_probability < 0.0 || cfg.attack.tap_probability > 1.0)
        throw ConfigError("--tap-probability must lie in [0,1]");

    print_effective("attack-sim",
                    {{"attack", opts.attack},
                     {"beta2", trimmed_double(opts.beta2)},
                     {"tap-probability", trimmed_double(opts.tap_probability)},
                     {"decoys", std::to_string(opts.decoys)},
                     {"payload-bits", std::to_string(opts.payload_bits)},
                     {"decoy-set", opts.decoy_set},
                     {"trials", std::to_string(opts.trials)},
                     {"seed", std::to_string(opts.common.seed)},
                     {"format", opts.common.format_name},
                     {"output",
                      opts.common.output_path.empty() ? "-" : opts.common.output_path}});

    Rng rng(opts.common.seed);
    const adv::AttackReport report = adv::detection_experiment(cfg, rng);

    switch (opts.common.format()) {
        case Format::pretty: {
            std::string text =
                fmt("%s over %lld trials (%d decoys each, set %s)\n", opts.attack.c_str(),
                    cfg.trials, cfg.decoys_per_trial, opts.decoy_set.c_str());
            text += fmt("  per-decoy error rate %.5f (%lld/%lld)\n",
                        report.per_decoy_error_rate(), report.decoy_errors,
                        report.decoy_units);
            text += fmt("  run detection rate  %.5f (%lld/%lld)\n",
                        report.run_detection_rate(), report.detections, report.trials);
            if (report.payload_bits > 0)
                text += fmt("  payload info proxy  %.5f (%lld/%lld bits read)\n",
                            report.info_proxy(), report.payload_correct,
                            report.payload_bits);
            emit(opts.common.output_path, text);
            break;
        }
        case Format::csv:
            emit(opts.common.output_path, analysis::attack_csv(cfg, report));
            break;
        case Format::structured_log: {
            std::vector<ordered_json> lines;
            ordered_json head;
            head["record"] = "config";
            head["command"] = "attack-sim";
            head["attack"] = opts.attack;
            head["beta2"] = opts.beta2;
            head["tap_probability"] = opts.tap_probability;
            head["decoys"] = opts.decoys;
            head["payload_bits"] = opts.payload_bits;
            head["decoy_set"] = opts.decoy_set;
            head["trials"] = opts.trials;
            head["seed"] = opts.common.seed;
            lines.push_back(head);
            ordered_json rec;
            rec["record"] = "attack";
            rec["decoy_units"] = report.decoy_units;
            rec["decoy_errors"] = report.decoy_errors;
            rec["per_decoy_error_rate"] = report.per_decoy_error_rate();
            rec["detections"] = report.detections;
            rec["run_detection_rate"] = report.run_detection_rate();
            rec["payload_bits"] = report.payload_bits;
            rec["payload_correct"] = report.payload_correct;
            rec["info_proxy"] = report.info_proxy();
            lines.push_back(rec);
            emit(opts.common.output_path, join_lines(lines));
            break;
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// iteration-profile

struct IterationOpts {
    CommonOpts common;
    std::string protocol = "qav6";
    int voters = 4;
};

void add_iteration_command(CLI::App& app, IterationOpts& opts, FileKeys& keys) {
    CLI::App* cmd = app.add_subcommand(
        "iteration-profile", "Iterations used per vetoer count for the iterative schemes");
    add_common(cmd, keys, opts.common);
    bind_option(cmd, keys, "protocol", opts.protocol, "rkqav or qav6");
    bind_option(cmd, keys, "voters", opts.voters, "Number of voters");
}

int handle_iteration(CLI::App* cmd, const FileKeys& keys, IterationOpts& opts) {
    finish_common(cmd, keys, opts.common);
    const proto::ProtocolId id = proto::protocol_from_name(opts.protocol);

    print_effective("iteration-profile",
                    {{"protocol", proto::protocol_name(id)},
                     {"voters", std::to_string(opts.voters)},
                     {"seed", std::to_string(opts.common.seed)},
                     {"format", opts.common.format_name},
                     {"output",
                      opts.common.output_path.empty() ? "-" : opts.common.output_path}});

    const analysis::IterationProfile profile =
        analysis::iteration_profile(id, opts.voters, opts.common.seed);

    switch (opts.common.format()) {
        case Format::pretty: {
            std::string text = fmt("%s iterations, %d voters (cap %d)\n",
                                   proto::protocol_name(id), opts.voters,
                                   proto::iteration_cap(opts.voters));
            for (std::size_t k = 0; k < profile.iterations.size(); ++k)
                text += fmt("  k=%zu: %d\n", k, profile.iterations[k]);
            emit(opts.common.output_path, text);
            break;
        }
        case Format::csv:
            emit(opts.common.output_path, analysis::iteration_csv(profile));
            break;
        case Format::structured_log: {
            std::vector<ordered_json> lines;
            ordered_json head;
            head["record"] = "config";
            head["command"] = "iteration-profile";
            head["protocol"] = proto::protocol_name(id);
            head["voters"] = opts.voters;
            head["seed"] = opts.common.seed;
            lines.push_back(head);
            for (std::size_t k = 0; k < profile.iterations.size(); ++k) {
                ordered_json line;
                line["record"] = "iterations";
                line["k"] = k;
                line["iterations"] = profile.iterations[k];
                lines.push_back(line);
            }
            emit(opts.common.output_path, join_lines(lines));
            break;
        }
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Anonymous-veto protocol simulator and analysis toolkit"};
    app.require_subcommand(1);

    RunOpts run_opts;
    FileKeys run_keys;
    add_run_command(app, run_opts, run_keys);

    SweepOpts sweep_opts;
    FileKeys sweep_keys;
    add_sweep_command(app, sweep_opts, sweep_keys);

    EfficiencyOpts eff_opts;
    FileKeys eff_keys;
    add_efficiency_command(app, eff_opts, eff_keys);

    AttackOpts attack_opts;
    FileKeys attack_keys;
    add_attack_command(app, attack_opts, attack_keys);

    IterationOpts iter_opts;
    FileKeys iter_keys;
    add_iteration_command(app, iter_opts, iter_keys);

    try {
        app.parse(argc, argv);
        CLI::App* active = app.get_subcommands().front();
        const std::string name = active->get_name();
        if (name == "run") return handle_run(active, run_keys, run_opts);
        if (name == "sweep-noise") return handle_sweep(active, sweep_keys, sweep_opts);
        if (name == "efficiency-table")
            return handle_efficiency(active, eff_keys, eff_opts);
        if (name == "attack-sim") return handle_attack(active, attack_keys, attack_opts);
        if (name == "iteration-profile")
            return handle_iteration(active, iter_keys, iter_opts);
        throw InternalError("unhandled subcommand " + name);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace qav::cli
