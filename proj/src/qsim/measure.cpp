#include "qav/qsim/measure.hpp"

#include <algorithm>
#include <cmath>

#include "qav/common/error.hpp"

namespace qav::qsim {

namespace {

const MatrixXcd& cnot_wide() {
    static const MatrixXcd m = cnot();
    return m;
}

// Basis-change circuit mapping the named basis onto the computational one.
// For bell/ghz: CNOT fan-out from the first target, then H on it.
void to_measurement_frame(StateVector& psi, Basis basis, const std::vector<int>& targets) {
    switch (basis) {
        case Basis::computational:
            return;
        case Basis::diagonal:
            for (int t : targets) psi.apply_1q(hadamard(), t);
            return;
        case Basis::bell:
            QAV_CHECK(targets.size() == 2, "Bell measurement needs exactly 2 targets");
            [[fallthrough]];
        case Basis::ghz: {
            QAV_CHECK(targets.size() >= 2, "entangled-basis measurement needs >= 2 targets");
            for (size_t i = 1; i < targets.size(); ++i)
                psi.apply_unitary(cnot_wide(), {targets[0], targets[i]});
            psi.apply_1q(hadamard(), targets[0]);
            return;
        }
    }
}

void from_measurement_frame(StateVector& psi, Basis basis, const std::vector<int>& targets) {
    switch (basis) {
        case Basis::computational:
            return;
        case Basis::diagonal:
            for (int t : targets) psi.apply_1q(hadamard(), t);
            return;
        case Basis::bell:
        case Basis::ghz: {
            psi.apply_1q(hadamard(), targets[0]);
            for (size_t i = targets.size(); i-- > 1;)
                psi.apply_unitary(cnot_wide(), {targets[0], targets[i]});
            return;
        }
    }
}

}  // namespace

MeasureResult measure(StateVector& psi, Basis basis, const std::vector<int>& targets,
                      Rng& rng) {
    const int n = psi.num_qubits();
    const int k = static_cast<int>(targets.size());
    QAV_CHECK(k >= 1 && k <= n, "bad measurement target count");
    to_measurement_frame(psi, basis, targets);

    Eigen::Index bit_buf[kHardMaxQubits];
    for (int pos = 0; pos < k; ++pos)
        bit_buf[pos] = Eigen::Index(1) << (n - 1 - targets[pos]);

    // Outcome probabilities over the 2^k target patterns; stack storage for
    // the common small cases.
    constexpr int kStackPatterns = 256;
    double prob_buf[kStackPatterns];
    std::vector<double> prob_heap;
    const size_t patterns = size_t(1) << k;
    double* prob = prob_buf;
    if (patterns > kStackPatterns) {
        prob_heap.assign(patterns, 0.0);
        prob = prob_heap.data();
    } else {
        std::fill(prob, prob + patterns, 0.0);
    }
    auto& amps = psi.amplitudes();
    for (Eigen::Index i = 0; i < psi.dim(); ++i) {
        const double w = std::norm(amps(i));
        if (w == 0.0) continue;
        uint64_t pattern = 0;
        for (int pos = 0; pos < k; ++pos)
            pattern = (pattern << 1) | ((i & bit_buf[pos]) ? 1 : 0);
        prob[pattern] += w;
    }

    double r = rng.uniform01();
    uint64_t outcome = patterns - 1;
    for (size_t p = 0; p < patterns; ++p) {
        if (r < prob[p]) { outcome = p; break; }
        r -= prob[p];
    }
    QAV_CHECK(prob[outcome] > 1e-15, "sampled a zero-probability outcome");

    // Project onto the sampled pattern and rescale in the same pass.
    const cd scale(1.0 / std::sqrt(prob[outcome]), 0.0);
    for (Eigen::Index i = 0; i < psi.dim(); ++i) {
        uint64_t pattern = 0;
        for (int pos = 0; pos < k; ++pos)
            pattern = (pattern << 1) | ((i & bit_buf[pos]) ? 1 : 0);
        amps(i) = pattern == outcome ? amps(i) * scale : cd(0, 0);
    }
    from_measurement_frame(psi, basis, targets);
    return {outcome, prob[outcome]};
}

Overlap overlap_label(const StateVector& a, const StateVector& b, double tol) {
    const double m2 = std::norm(a.inner_product(b));
    Overlap ov;
    ov.magnitude2 = m2;
    if (m2 >= 1.0 - tol) ov.label = OverlapLabel::same;
    else if (m2 <= tol) ov.label = OverlapLabel::orthogonal;
    else ov.label = OverlapLabel::partial;
    return ov;
}

}  // namespace qav::qsim
