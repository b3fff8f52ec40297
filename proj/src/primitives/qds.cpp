#include "qav/primitives/qds.hpp"

#include <sstream>

#include "qav/common/error.hpp"

namespace qav::prim {

QdsSignature qds_sign(World& world, std::vector<Qubit>& qubits, const QdsParams& params,
                      Rng& rng) {
    QAV_CHECK(params.length > 0, "signature length must be positive");
    QdsSignature sig;
    sig.indices.reserve(params.length);
    for (int i = 0; i < params.length; ++i) {
        int idx = static_cast<int>(rng.uniform_below(4));
        sig.indices.push_back(idx);
        qubits.push_back(world.add_qubit(qsim::StateVector::bb84(idx)));
    }
    return sig;
}

QdsElimination qds_receive(World& world, const std::vector<Qubit>& qubits, Rng& rng) {
    QdsElimination elim;
    elim.eliminated.reserve(qubits.size());
    for (Qubit q : qubits) {
        int basis_bit = rng.coin();
        auto basis = basis_bit ? qsim::Basis::diagonal : qsim::Basis::computational;
        auto r = world.measure(basis, {q}, rng);
        // Outcome o in basis b could never come from |b, 1-o>.
        int ruled_out = (basis_bit << 1) | (1 - static_cast<int>(r.outcome));
        elim.eliminated.push_back(ruled_out);
    }
    return elim;
}

double qds_mismatch(const QdsElimination& elim, const std::vector<int>& claim) {
    QAV_CHECK(elim.eliminated.size() == claim.size(),
              "claim length differs from elimination record");
    if (claim.empty()) return 0.0;
    int hits = 0;
    for (size_t i = 0; i < claim.size(); ++i)
        if (claim[i] == elim.eliminated[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(claim.size());
}

bool qds_accept(const QdsParams& params, double mismatch) {
    return mismatch <= params.threshold;
}

bool qds_round(World& world, proto::Transcript& log, const std::string& signer,
               const std::string& verifier, const QdsParams& params, Rng& rng) {
    std::vector<Qubit> qubits;
    QdsSignature sig = qds_sign(world, qubits, params, rng);
    log.record(proto::Rec::qds, signer, verifier,
               "signature qubits=" + std::to_string(params.length));
    QdsElimination elim = qds_receive(world, qubits, rng);
    double mismatch = qds_mismatch(elim, sig.indices);
    bool ok = qds_accept(params, mismatch);
    std::ostringstream verdict;
    verdict << "mismatch=" << mismatch << (ok ? " accept" : " reject");
    log.record(proto::Rec::qds, verifier, signer, verdict.str());
    return ok;
}

}  // namespace qav::prim
