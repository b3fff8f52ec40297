#include "qav/primitives/keys.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qav/common/error.hpp"
#include "qav/qsim/gates.hpp"

namespace qav::prim {

namespace {

constexpr int kMaxBatchRounds = 64;

std::string bits_str(const std::vector<int>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (int b : bits) s.push_back(b ? '1' : '0');
    return s;
}

int confirm_count_for(const KeyParams& params) {
    if (params.confirm_fraction <= 0.0) return 0;
    return std::max(1, static_cast<int>(std::ceil(params.confirm_fraction *
                                                  params.length)));
}

// Reveals `confirm` pooled bits at random positions, compares both views, and
// aborts when the mismatch rate exceeds `threshold`. Surviving bits are
// trimmed to `length`.
bool confirm_and_trim(proto::Transcript& log, const std::string& a,
                      const std::string& b, std::vector<int>& a_bits,
                      std::vector<int>& b_bits, int length, int confirm,
                      double threshold, Rng& rng) {
    QAV_CHECK(a_bits.size() == b_bits.size(), "key views have different lengths");
    QAV_CHECK(static_cast<int>(a_bits.size()) >= length + confirm,
              "key pool smaller than requested length");
    std::vector<size_t> order(a_bits.size());
    std::iota(order.begin(), order.end(), size_t{0});
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.uniform_below(i)]);

    int mismatches = 0;
    std::vector<char> revealed(a_bits.size(), 0);
    for (int i = 0; i < confirm; ++i) {
        size_t pos = order[i];
        revealed[pos] = 1;
        if (a_bits[pos] != b_bits[pos]) ++mismatches;
    }
    double rate = confirm > 0 ? static_cast<double>(mismatches) / confirm : 0.0;
    bool ok = confirm == 0 || rate <= threshold;
    if (log.enabled()) {
        std::ostringstream msg;
        msg << "revealed=" << confirm << " mismatches=" << mismatches
            << (ok ? " ok" : " abort");
        log.record(proto::Rec::key_confirm, a, b, msg.str());
    }
    if (!ok) {
        log.record(proto::Rec::abort_event, a, "all",
                   "key confirmation failed between " + a + " and " + b);
        return false;
    }

    std::vector<int> a_kept, b_kept;
    a_kept.reserve(length);
    b_kept.reserve(length);
    for (size_t pos = 0; pos < a_bits.size(); ++pos) {
        if (revealed[pos]) continue;
        if (static_cast<int>(a_kept.size()) == length) break;
        a_kept.push_back(a_bits[pos]);
        b_kept.push_back(b_bits[pos]);
    }
    QAV_CHECK(static_cast<int>(a_kept.size()) == length, "key trim fell short");
    a_bits = std::move(a_kept);
    b_bits = std::move(b_kept);
    return true;
}

KeyResult run_bb84(World& world, proto::Transcript& log, const std::string& a,
                   const std::string& b, const KeyParams& params, Rng& rng) {
    KeyResult out;
    int confirm = confirm_count_for(params);
    int needed = params.length + confirm;
    std::vector<int> a_pool, b_pool;
    int rounds = 0;
    while (static_cast<int>(a_pool.size()) < needed) {
        QAV_CHECK(++rounds <= kMaxBatchRounds, "sifting failed to converge");
        int batch = 2 * (needed - static_cast<int>(a_pool.size())) + 16;
        std::vector<int> prep_basis(batch), prep_bit(batch), meas_basis(batch);
        std::vector<Qubit> qs;
        qs.reserve(batch);
        for (int i = 0; i < batch; ++i) {
            prep_basis[i] = rng.coin();
            prep_bit[i] = rng.coin();
            qs.push_back(world.add_qubit(
                qsim::StateVector::bb84((prep_basis[i] << 1) | prep_bit[i])));
        }
        auto tr = transmit(world, log, a, b, qs, params.decoys, params.noise,
                           params.tap, rng);
        if (tr.aborted) {
            out.aborted = true;
            return out;
        }
        std::vector<int> got(batch);
        for (int i = 0; i < batch; ++i) {
            meas_basis[i] = rng.coin();
            auto basis =
                meas_basis[i] ? qsim::Basis::diagonal : qsim::Basis::computational;
            got[i] = static_cast<int>(world.measure(basis, {qs[i]}, rng).outcome);
        }
        if (log.enabled()) {
            log.record(proto::Rec::basis, b, a, "bases " + bits_str(meas_basis));
            log.record(proto::Rec::basis, a, b, "bases " + bits_str(prep_basis));
        }
        for (int i = 0; i < batch; ++i) {
            if (prep_basis[i] != meas_basis[i]) continue;
            a_pool.push_back(prep_bit[i]);
            b_pool.push_back(got[i]);
        }
    }
    out.a_bits = std::move(a_pool);
    out.b_bits = std::move(b_pool);
    if (!confirm_and_trim(log, a, b, out.a_bits, out.b_bits, params.length, confirm,
                          params.decoys.threshold, rng))
        out.aborted = true;
    return out;
}

KeyResult run_shared_bell(World& world, proto::Transcript& log, const std::string& a,
                          const std::string& b, const KeyParams& params, Rng& rng) {
    KeyResult out;
    int confirm = confirm_count_for(params);
    int needed = params.length + confirm;
    std::vector<Qubit> ha, hb;
    ha.reserve(needed);
    hb.reserve(needed);
    for (int i = 0; i < needed; ++i) {
        auto pair = world.add_register(qsim::StateVector::bell_phi_plus());
        ha.push_back(pair[0]);
        hb.push_back(pair[1]);
    }
    if (transmit(world, log, "CA", a, ha, params.decoys, params.noise, params.tap, rng)
            .aborted ||
        transmit(world, log, "CA", b, hb, params.decoys, params.noise, params.tap, rng)
            .aborted) {
        out.aborted = true;
        return out;
    }
    for (int i = 0; i < needed; ++i) {
        out.a_bits.push_back(static_cast<int>(
            world.measure(qsim::Basis::diagonal, {ha[i]}, rng).outcome));
        out.b_bits.push_back(static_cast<int>(
            world.measure(qsim::Basis::diagonal, {hb[i]}, rng).outcome));
    }
    if (!confirm_and_trim(log, a, b, out.a_bits, out.b_bits, params.length, confirm,
                          params.decoys.threshold, rng))
        out.aborted = true;
    return out;
}

KeyResult run_orthogonal_qka(World& world, proto::Transcript& log, const std::string& a,
                             const std::string& b, const KeyParams& params, Rng& rng) {
    KeyResult out;
    int confirm = confirm_count_for(params);
    int needed = params.length + confirm;
    int pairs = (needed + 1) / 2;

    std::vector<int> kij(2 * pairs), kji(2 * pairs);
    for (auto& bit : kij) bit = rng.coin();
    for (auto& bit : kji) bit = rng.coin();

    std::vector<Qubit> home, travel;
    home.reserve(pairs);
    travel.reserve(pairs);
    for (int p = 0; p < pairs; ++p) {
        auto pair = world.add_register(qsim::StateVector::bell_phi_plus());
        home.push_back(pair[0]);
        travel.push_back(pair[1]);
    }
    if (transmit(world, log, a, b, travel, params.decoys, params.noise, params.tap, rng)
            .aborted) {
        out.aborted = true;
        return out;
    }
    // Dense-code two contribution bits per travelling half.
    const qsim::Matrix2cd ops[4] = {qsim::identity2(), qsim::pauli_x(),
                                    qsim::cd(0, 1) * qsim::pauli_y(), qsim::pauli_z()};
    for (int p = 0; p < pairs; ++p) {
        int code = (kji[2 * p] << 1) | kji[2 * p + 1];
        if (code != 0) world.apply_1q(ops[code], travel[p]);
    }
    if (log.enabled())
        log.record(proto::Rec::note, b, b,
                   "dense-coded pairs=" + std::to_string(pairs));
    if (transmit(world, log, b, a, travel, params.decoys, params.noise, params.tap, rng)
            .aborted) {
        out.aborted = true;
        return out;
    }
    std::vector<int> decoded(2 * pairs);
    for (int p = 0; p < pairs; ++p) {
        auto r = world.measure(qsim::Basis::bell, {home[p], travel[p]}, rng);
        decoded[2 * p] = (r.outcome == 3 || r.outcome == 2) ? 1 : 0;
        decoded[2 * p + 1] = (r.outcome == 1 || r.outcome == 2) ? 1 : 0;
    }
    if (log.enabled())
        log.record(proto::Rec::announce, a, b, "contribution " + bits_str(kij));
    out.a_bits.resize(needed);
    out.b_bits.resize(needed);
    for (int i = 0; i < needed; ++i) {
        out.a_bits[i] = kij[i] ^ decoded[i];
        out.b_bits[i] = kij[i] ^ kji[i];
    }
    if (!confirm_and_trim(log, a, b, out.a_bits, out.b_bits, params.length, confirm,
                          params.decoys.threshold, rng))
        out.aborted = true;
    return out;
}

KeyResult run_semiquantum(World& world, proto::Transcript& log, const std::string& a,
                          const std::string& b, const KeyParams& params, Rng& rng) {
    KeyResult out;
    int confirm = confirm_count_for(params);
    int needed = params.length + confirm;
    // The restricted parties cannot run decoy subprotocols; the reflected
    // pairs are the only tamper check on these links.
    DecoyPolicy none{0.0, DecoySub::bb84, 0.0};
    std::vector<int> a_pool, b_pool;
    int check_units = 0;
    int check_errors = 0;
    int rounds = 0;
    while (static_cast<int>(a_pool.size()) < needed) {
        QAV_CHECK(++rounds <= kMaxBatchRounds, "mediated rounds failed to converge");
        int batch = 4 * (needed - static_cast<int>(a_pool.size())) + 8;
        std::vector<Qubit> ha, hb;
        ha.reserve(batch);
        hb.reserve(batch);
        for (int i = 0; i < batch; ++i) {
            auto pair = world.add_register(qsim::StateVector::bell_phi_plus());
            ha.push_back(pair[0]);
            hb.push_back(pair[1]);
        }
        transmit(world, log, "CA", a, ha, none, params.noise, params.tap, rng);
        transmit(world, log, "CA", b, hb, none, params.noise, params.tap, rng);
        std::vector<int> ra(batch), rb(batch), ta(batch, 0), tb(batch, 0);
        for (int i = 0; i < batch; ++i) {
            ra[i] = rng.coin();
            if (ra[i] == 0)
                ta[i] = static_cast<int>(
                    world.measure(qsim::Basis::computational, {ha[i]}, rng).outcome);
            rb[i] = rng.coin();
            if (rb[i] == 0)
                tb[i] = static_cast<int>(
                    world.measure(qsim::Basis::computational, {hb[i]}, rng).outcome);
        }
        transmit(world, log, a, "CA", ha, none, params.noise, params.tap, rng);
        transmit(world, log, b, "CA", hb, none, params.noise, params.tap, rng);
        std::vector<int> c(batch);
        for (int i = 0; i < batch; ++i) {
            auto r = world.measure(qsim::Basis::bell, {ha[i], hb[i]}, rng);
            c[i] = r.outcome == 0 ? 0 : 1;
        }
        if (log.enabled()) {
            log.record(proto::Rec::announce, "CA", "all",
                       "bell-results " + bits_str(c));
            log.record(proto::Rec::announce, a, "CA", "choices " + bits_str(ra));
            log.record(proto::Rec::announce, b, "CA", "choices " + bits_str(rb));
        }
        for (int i = 0; i < batch; ++i) {
            if (ra[i] == 1 && rb[i] == 1) {
                ++check_units;
                if (c[i] != 0) ++check_errors;
            } else if (ra[i] == 0 && rb[i] == 0) {
                a_pool.push_back(ta[i]);
                b_pool.push_back(tb[i]);
            }
        }
    }
    double rate =
        check_units > 0 ? static_cast<double>(check_errors) / check_units : 0.0;
    bool ok = check_units == 0 || rate <= params.decoys.threshold;
    if (log.enabled()) {
        std::ostringstream msg;
        msg << "reflected-pairs units=" << check_units << " errors=" << check_errors
            << (ok ? " ok" : " abort");
        log.record(proto::Rec::decoy_verdict, "CA", "all", msg.str());
    }
    if (!ok) {
        log.record(proto::Rec::abort_event, "CA", "all",
                   "reflected-pair check failed for " + a + " and " + b);
        out.aborted = true;
        return out;
    }
    out.a_bits = std::move(a_pool);
    out.b_bits = std::move(b_pool);
    if (!confirm_and_trim(log, a, b, out.a_bits, out.b_bits, params.length, confirm,
                          params.decoys.threshold, rng))
        out.aborted = true;
    return out;
}

}  // namespace

KeyMethod key_method_from_name(const std::string& name) {
    if (name == "bb84-qkd" || name == "bb84") return KeyMethod::bb84_qkd;
    if (name == "shared-bell" || name == "bell") return KeyMethod::shared_bell;
    if (name == "orthogonal-qka" || name == "qka") return KeyMethod::orthogonal_qka;
    if (name == "semiquantum-mediated" || name == "semiquantum")
        return KeyMethod::semiquantum_mediated;
    throw ConfigError("unknown key method: " + name);
}

const char* key_method_name(KeyMethod method) {
    switch (method) {
        case KeyMethod::bb84_qkd: return "bb84-qkd";
        case KeyMethod::shared_bell: return "shared-bell";
        case KeyMethod::orthogonal_qka: return "orthogonal-qka";
        case KeyMethod::semiquantum_mediated: return "semiquantum-mediated";
    }
    throw InternalError("unhandled key method");
}

KeyResult establish_key(World& world, proto::Transcript& log, const std::string& a,
                        const std::string& b, const KeyParams& params, Rng& rng) {
    if (params.length <= 0) throw ConfigError("key length must be positive");
    switch (params.method) {
        case KeyMethod::bb84_qkd: return run_bb84(world, log, a, b, params, rng);
        case KeyMethod::shared_bell:
            return run_shared_bell(world, log, a, b, params, rng);
        case KeyMethod::orthogonal_qka:
            return run_orthogonal_qka(world, log, a, b, params, rng);
        case KeyMethod::semiquantum_mediated:
            return run_semiquantum(world, log, a, b, params, rng);
    }
    throw InternalError("unhandled key method");
}

}  // namespace qav::prim
