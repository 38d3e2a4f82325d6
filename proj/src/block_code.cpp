#include "ldgm/block_code.hpp"

#include <stdexcept>

#include "ldgm/llr_math.hpp"

namespace ldgm {

BlockCode::BlockCode(EnsembleParams params, SparseBitMatrix P)
    : params_(params), P_(std::move(P)) {
    params_.validate();
    if (P_.rows() != params_.k || P_.cols() != params_.n - params_.k)
        throw std::invalid_argument("BlockCode: P shape does not match (k, n-k)");
    checks_ = P_.col_support();
    const std::size_t r = parity_bits();
    check_offset_.resize(r + 1);
    check_offset_[0] = 0;
    for (std::size_t j = 0; j < r; ++j)
        check_offset_[j + 1] = check_offset_[j] + static_cast<std::uint32_t>(checks_[j].size());
    edge_info_.reserve(check_offset_[r]);
    for (const auto &c : checks_) edge_info_.insert(edge_info_.end(), c.begin(), c.end());
    var_edges_.resize(params_.k);
    for (std::size_t j = 0; j < r; ++j)
        for (std::uint32_t e = check_offset_[j]; e < check_offset_[j + 1]; ++e)
            var_edges_[edge_info_[e]].push_back(e);
}

BlockCode make_block_code(const EnsembleParams &params) {
    return BlockCode(params, gen_parity_matrix(params));
}

BitVec encode_block(const BitVec &u, const BlockCode &code) {
    if (u.size() != code.k()) throw std::invalid_argument("encode_block: |u| != k");
    BitVec c(code.n(), 0);
    std::copy(u.begin(), u.end(), c.begin());
    for (std::size_t i = 0; i < code.k(); ++i) {
        if (!u[i]) continue;
        for (std::uint32_t j : code.P().row(i)) c[code.k() + j] ^= 1u;
    }
    return c;
}

namespace {

// One BP run; with a non-null prior the equality nodes absorb it.
SoftDecodeResult bp_run(const LlrWord &llr, const BlockCode &code,
                        const std::vector<double> *prior, int i_max) {
    const std::size_t k = code.k();
    const std::size_t r = code.parity_bits();
    if (llr.size() != code.n()) throw std::invalid_argument("decode_block: |llr| != n");
    if (prior && prior->size() != k)
        throw std::invalid_argument("decode_block_soft: |prior| != k");
    if (i_max < 1) throw std::invalid_argument("decode_block: i_max >= 1 required");

    const double *chan_u = llr.values.data();
    const double *chan_p = llr.values.data() + k;
    const auto &check_offset = code.check_offset();
    const auto &edge_info = code.edge_info();

    std::vector<double> v2c(code.edge_count(), 0.0);
    std::vector<double> c2v(code.edge_count(), 0.0);
    std::vector<double> app(k, 0.0);
    std::vector<double> ext_p(r, 0.0);
    std::vector<double> scratch;
    BitVec hard_u(k, 0);

    auto intrinsic = [&](std::size_t i) {
        return chan_u[i] + (prior ? (*prior)[i] : 0.0);
    };

    int used = 0;
    bool converged = false;
    for (int it = 1; it <= i_max; ++it) {
        used = it;
        // Equality nodes: v2c = intrinsic + sum of other check messages.
        for (std::size_t i = 0; i < k; ++i) {
            double total = intrinsic(i);
            for (std::uint32_t e : code.var_edges()[i]) total += c2v[e];
            for (std::uint32_t e : code.var_edges()[i]) v2c[e] = clamp_llr(total - c2v[e]);
        }
        // Check nodes: tanh rule over the other ports; the parity half-edge
        // carries the channel LLR.
        for (std::size_t j = 0; j < r; ++j) {
            const std::uint32_t lo = check_offset[j];
            const std::uint32_t hi = check_offset[j + 1];
            const std::size_t deg = hi - lo;
            scratch.resize(deg);
            double all = 1.0;
            for (std::size_t s = 0; s < deg; ++s) {
                scratch[s] = tanh_half(v2c[lo + s]);
                all *= scratch[s];
            }
            ext_p[j] = llr_from_tanh(all);
            const double tp = tanh_half(chan_p[j]);
            // prefix/suffix products so zero inputs are handled exactly
            double prefix = tp;
            for (std::size_t s = 0; s < deg; ++s) {
                const double cur = scratch[s];
                scratch[s] = prefix; // product of chan and inputs before s
                prefix *= cur;
            }
            double suffix = 1.0;
            for (std::size_t s = deg; s-- > 0;) {
                c2v[lo + s] = llr_from_tanh(scratch[s] * suffix);
                suffix *= tanh_half(v2c[lo + s]);
            }
        }
        // Decision and early stop on hard parity satisfaction.
        for (std::size_t i = 0; i < k; ++i) {
            double total = intrinsic(i);
            for (std::uint32_t e : code.var_edges()[i]) total += c2v[e];
            app[i] = total;
            hard_u[i] = total < 0.0 ? 1 : 0;
        }
        // Stop once the hard decision is an unambiguous codeword: syndrome
        // zero and no APP still marks an erasure (ties on the BEC would
        // otherwise fabricate a codeword before the fixed point).
        bool all_satisfied = true;
        for (std::size_t i = 0; i < k && all_satisfied; ++i)
            all_satisfied = std::abs(app[i]) >= LLR_ERASURE_EPS;
        for (std::size_t j = 0; j < r && all_satisfied; ++j) {
            const double app_p = chan_p[j] + ext_p[j];
            all_satisfied = std::abs(app_p) >= LLR_ERASURE_EPS;
            std::uint8_t sum = app_p < 0.0 ? 1 : 0;
            for (std::uint32_t e = check_offset[j]; e < check_offset[j + 1]; ++e)
                sum ^= hard_u[edge_info[e]];
            all_satisfied = all_satisfied && sum == 0;
        }
        if (all_satisfied) {
            converged = true;
            break;
        }
    }

    SoftDecodeResult result;
    result.outcome.bits = hard_u;
    result.outcome.app.resize(k);
    result.outcome.iterations = used;
    result.outcome.converged = converged;
    result.info_extrinsic.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        result.outcome.app[i] = clamp_llr(app[i]);
        result.info_extrinsic[i] = clamp_llr(app[i] - (prior ? (*prior)[i] : 0.0));
    }
    result.parity_extrinsic = std::move(ext_p);
    return result;
}

} // namespace

DecodeOutcome decode_block(const LlrWord &llr, const BlockCode &code, int i_max) {
    return bp_run(llr, code, nullptr, i_max).outcome;
}

SoftDecodeResult decode_block_soft(const LlrWord &llr, const BlockCode &code,
                                   const std::vector<double> &prior, int i_max) {
    return bp_run(llr, code, &prior, i_max);
}

} // namespace ldgm
