#include "qav/qsim/channel.hpp"

#include <cmath>

#include "qav/common/error.hpp"

namespace qav::qsim {

double KrausChannel::completeness_defect() const {
    Matrix2cd sum = Matrix2cd::Zero();
    for (const Matrix2cd& e : ops) sum += e.adjoint() * e;
    return (sum - Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

std::string KrausChannel::name() const {
    switch (kind) {
        case ChannelKind::identity: return "identity";
        case ChannelKind::amplitude_damping: return "amplitude";
        case ChannelKind::phase_damping: return "phase";
    }
    throw InternalError("unknown channel kind");
}

KrausChannel make_channel(ChannelKind kind, double eta) {
    if (kind != ChannelKind::identity && (eta < 0.0 || eta > 1.0))
        throw ConfigError("channel parameter eta must lie in [0,1]");
    KrausChannel ch;
    ch.kind = kind;
    ch.eta = (kind == ChannelKind::identity) ? 0.0 : eta;
    switch (kind) {
        case ChannelKind::identity: {
            ch.ops = {Matrix2cd::Identity()};
            break;
        }
        case ChannelKind::amplitude_damping: {
            Matrix2cd e0 = Matrix2cd::Identity();
            e0(1, 1) = std::sqrt(1.0 - eta);
            Matrix2cd e1 = Matrix2cd::Zero();
            e1(0, 1) = std::sqrt(eta);
            ch.ops = {e0, e1};
            break;
        }
        case ChannelKind::phase_damping: {
            Matrix2cd e0 = Matrix2cd::Identity();
            e0(1, 1) = std::sqrt(1.0 - eta);
            Matrix2cd e1 = Matrix2cd::Zero();
            e1(1, 1) = std::sqrt(eta);
            ch.ops = {e0, e1};
            break;
        }
    }
    QAV_CHECK(ch.completeness_defect() < 1e-12, "channel is not trace preserving");
    return ch;
}

ChannelKind channel_kind_from_name(const std::string& name) {
    if (name == "identity" || name == "none") return ChannelKind::identity;
    if (name == "amplitude" || name == "amplitude-damping") return ChannelKind::amplitude_damping;
    if (name == "phase" || name == "phase-damping") return ChannelKind::phase_damping;
    throw ConfigError("unknown channel kind: " + name);
}

void apply_channel(DensityOperator& rho, const KrausChannel& ch, int target) {
    if (ch.kind == ChannelKind::identity) return;
    const int n = rho.num_qubits();
    MatrixXcd out = MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (const Matrix2cd& e : ch.ops) {
        const MatrixXcd full = embed_operator(e, {target}, n);
        out += full * rho.matrix() * full.adjoint();
    }
    rho = DensityOperator(n, std::move(out));
}

void apply_channel_stochastic(StateVector& psi, const KrausChannel& ch, int target,
                              Rng& rng) {
    if (ch.kind == ChannelKind::identity) return;
    // Branch weights under each Kraus operator, then collapse to one branch.
    std::vector<double> weights(ch.ops.size());
    std::vector<StateVector> branches;
    branches.reserve(ch.ops.size());
    for (size_t i = 0; i < ch.ops.size(); ++i) {
        StateVector branch = psi;
        branch.apply_1q(ch.ops[i], target);
        weights[i] = branch.norm() * branch.norm();
        branches.push_back(std::move(branch));
    }
    double r = rng.uniform01();
    size_t pick = ch.ops.size() - 1;
    for (size_t i = 0; i < ch.ops.size(); ++i) {
        if (r < weights[i]) { pick = i; break; }
        r -= weights[i];
    }
    QAV_CHECK(weights[pick] > 1e-15, "picked a zero-probability Kraus branch");
    psi = std::move(branches[pick]);
    psi.renormalize();
}

}  // namespace qav::qsim
