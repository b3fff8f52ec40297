#include "qav/analysis/fidelity.hpp"

#include <cmath>

#include "qav/common/error.hpp"
#include "qav/protocols/subgroup.hpp"
#include "qav/qsim/state.hpp"

namespace qav::analysis {

namespace {

using proto::ProtocolId;
using qsim::ChannelKind;
using qsim::DensityOperator;
using qsim::KrausChannel;
using qsim::StateVector;

double fidelity_qav1(const KrausChannel& ch) {
    double total = 0.0;
    for (int idx = 0; idx < 4; ++idx) {
        StateVector psi = StateVector::bb84(idx);
        DensityOperator rho(psi);
        qsim::apply_channel(rho, ch, 0);
        total += rho.fidelity(psi);
    }
    return total / 4.0;
}

double fidelity_shared_pair(const KrausChannel& ch) {
    StateVector psi = StateVector::bell_phi_plus();
    DensityOperator rho(psi);
    qsim::apply_channel(rho, ch, 0);
    qsim::apply_channel(rho, ch, 1);
    return rho.fidelity(psi);
}

double fidelity_qav3(const KrausChannel& ch) {
    const qsim::Matrix2cd ops[4] = {qsim::identity2(), qsim::pauli_x(),
                                    qsim::cd(0, 1) * qsim::pauli_y(),
                                    qsim::pauli_z()};
    double total = 0.0;
    for (const auto& op : ops) {
        StateVector psi = StateVector::bell_phi_plus();
        DensityOperator rho(psi);
        qsim::apply_channel(rho, ch, 1);
        rho.apply_unitary(op, {1});
        StateVector ideal = psi;
        ideal.apply_1q(op, 1);
        qsim::apply_channel(rho, ch, 1);
        total += rho.fidelity(ideal);
    }
    return total / 4.0;
}

double fidelity_qav6(int n, const KrausChannel& ch) {
    const qsim::Matrix2cd z = qsim::pauli_z();
    double total = 0.0;
    for (uint32_t w = 0; w < (uint32_t{1} << n); ++w) {
        StateVector ideal = StateVector::bell_phi_plus();
        DensityOperator rho(ideal);
        for (int hop = 0; hop <= n; ++hop) {
            qsim::apply_channel(rho, ch, 1);
            if (hop < n && ((w >> hop) & 1)) {
                rho.apply_unitary(z, {1});
                ideal.apply_1q(z, 1);
            }
        }
        total += rho.fidelity(ideal);
    }
    return total / std::ldexp(1.0, n);
}

double fidelity_qav7(int n, const KrausChannel& ch) {
    const proto::SubgroupAssignment sub =
        proto::canonical_assignment(n, proto::StateKind::ghz, 0);
    const StateVector psi = proto::subgroup_state(sub.state_kind, sub.m);
    double total = 0.0;
    for (uint32_t w = 0; w < (uint32_t{1} << n); ++w) {
        StateVector ideal = psi;
        DensityOperator rho(psi);
        for (int hop = 0; hop <= n; ++hop) {
            for (int target : sub.travel) qsim::apply_channel(rho, ch, target);
            if (hop < n && ((w >> hop) & 1)) {
                const qsim::MatrixXcd u = sub.ops[hop].to_unitary();
                rho.apply_unitary(u, sub.travel);
                ideal.apply_unitary(u, sub.travel);
            }
        }
        total += rho.fidelity(ideal);
    }
    return total / std::ldexp(1.0, n);
}

bool is_damping(ChannelKind kind) {
    if (kind == ChannelKind::amplitude_damping) return true;
    if (kind == ChannelKind::phase_damping) return false;
    throw ConfigError("fidelity analysis needs a damping or dephasing channel");
}

}  // namespace

double average_fidelity_numeric(ProtocolId id, int n, ChannelKind kind, double eta) {
    is_damping(kind);
    const KrausChannel ch = qsim::make_channel(kind, eta);
    switch (id) {
        case ProtocolId::qav1: return fidelity_qav1(ch);
        case ProtocolId::qav2:
        case ProtocolId::qav4:
        case ProtocolId::qav5: return fidelity_shared_pair(ch);
        case ProtocolId::qav3: return fidelity_qav3(ch);
        case ProtocolId::qav6: return fidelity_qav6(n, ch);
        case ProtocolId::qav7: return fidelity_qav7(n, ch);
        default:
            throw ConfigError(
                std::string("no travelling-qubit noise model for protocol ") +
                proto::protocol_name(id));
    }
}

double fidelity_closed_form(ProtocolId id, int n, ChannelKind kind, double eta) {
    const bool ad = is_damping(kind);
    const double e = eta;
    const double s = std::sqrt(1.0 - e);
    switch (id) {
        case ProtocolId::qav1:
            return ad ? (3.0 - e + s) / 4.0 : (3.0 + s) / 4.0;
        case ProtocolId::qav2:
        case ProtocolId::qav4:
        case ProtocolId::qav5:
            return ad ? 1.0 - e + e * e / 2.0 : 1.0 - e / 2.0;
        case ProtocolId::qav3:
            return ad ? (1.0 - e / 2.0) * (1.0 - e / 2.0) : 1.0 - e / 2.0;
        case ProtocolId::qav6:
            if (n != 4) break;
            if (ad)
                return -std::pow(e, 5) / 4 + 5 * std::pow(e, 4) / 4 -
                       5 * std::pow(e, 3) / 2 + s * e * e / 2 + 5 * e * e / 2 -
                       s * e - 5 * e / 4 + s / 2 + 0.5;
            return s * e * e / 2 - s * e + s / 2 + 0.5;
        case ProtocolId::qav7:
            if (n != 4) break;
            if (ad)
                return std::pow(e, 10) / 4 - 19 * std::pow(e, 9) / 8 +
                       10 * std::pow(e, 8) - 197 * std::pow(e, 7) / 8 +
                       315 * std::pow(e, 6) / 8 - 349 * std::pow(e, 5) / 8 +
                       289 * std::pow(e, 4) / 8 - 195 * std::pow(e, 3) / 8 +
                       107 * e * e / 8 - 5 * e + 1;
            return -std::pow(e, 5) / 2 + 5 * std::pow(e, 4) / 2 -
                   5 * std::pow(e, 3) + 5 * e * e - 5 * e / 2 + 1;
        default: break;
    }
    throw ConfigError(std::string("no closed-form fidelity for protocol ") +
                      proto::protocol_name(id) + " with n=" + std::to_string(n));
}

std::vector<FidelityPoint> fidelity_sweep(ProtocolId id, int n, ChannelKind kind,
                                          const std::vector<double>& grid) {
    std::vector<FidelityPoint> points;
    points.reserve(grid.size());
    for (double eta : grid) {
        FidelityPoint p;
        p.eta = eta;
        p.closed_form = fidelity_closed_form(id, n, kind, eta);
        p.numeric = average_fidelity_numeric(id, n, kind, eta);
        p.abs_diff = std::abs(p.closed_form - p.numeric);
        points.push_back(p);
    }
    return points;
}

}  // namespace qav::analysis
