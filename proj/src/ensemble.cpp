#include "ldgm/ensemble.hpp"

#include <stdexcept>

#include "ldgm/rng.hpp"

namespace ldgm {

void EnsembleParams::validate() const {
    if (k == 0 || k >= n) throw std::invalid_argument("EnsembleParams: need 0 < k < n");
    if (!(rho >= 0.0 && rho <= 0.5))
        throw std::invalid_argument("EnsembleParams: need 0 <= rho <= 1/2");
}

void CouplingParams::validate() const {
    if (L < 1) throw std::invalid_argument("CouplingParams: need L >= 1");
    if (mode == CouplingMode::TailBiting && L <= m)
        throw std::invalid_argument("CouplingParams: tail-biting needs L > m");
}

SparseBitMatrix gen_parity_matrix(const EnsembleParams &params) {
    params.validate();
    const std::size_t k = params.k;
    const std::size_t r = params.n - params.k;
    Rng rng(params.seed);
    std::vector<std::vector<std::uint32_t>> support(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (rng.uniform01() < params.rho) support[i].push_back(static_cast<std::uint32_t>(j));
    return SparseBitMatrix(k, r, std::move(support));
}

std::vector<SparseBitMatrix> split_matrix(const SparseBitMatrix &P,
                                          const CouplingParams &coupling) {
    coupling.validate();
    const std::size_t layer_count = coupling.m + 1;
    Rng rng(coupling.split_seed);
    std::vector<std::vector<std::vector<std::uint32_t>>> supports(
        layer_count, std::vector<std::vector<std::uint32_t>>(P.rows()));
    // Only nonzeros need an assignment; splitting a zero is a no-op.
    for (std::size_t i = 0; i < P.rows(); ++i) {
        for (std::uint32_t j : P.row(i)) {
            const std::size_t layer = layer_count == 1 ? 0 : rng.bounded(layer_count);
            supports[layer][i].push_back(j);
        }
    }
    std::vector<SparseBitMatrix> layers;
    layers.reserve(layer_count);
    for (auto &s : supports) layers.emplace_back(P.rows(), P.cols(), std::move(s));
    return layers;
}

SparseBitMatrix build_block_parity_check(const SparseBitMatrix &P) {
    const std::size_t k = P.rows();
    const std::size_t r = P.cols();
    auto support = P.col_support(); // row j of H's left block = column j of P
    for (std::size_t j = 0; j < r; ++j)
        support[j].push_back(static_cast<std::uint32_t>(k + j)); // identity block
    return SparseBitMatrix(r, k + r, std::move(support));
}

SparseBitMatrix build_sc_parity_check(const std::vector<SparseBitMatrix> &layers,
                                      const CouplingParams &coupling,
                                      std::size_t n, std::size_t k) {
    coupling.validate();
    if (layers.size() != coupling.m + 1)
        throw std::invalid_argument("build_sc_parity_check: expected m+1 layers");
    const std::size_t r = n - k;
    for (const auto &Pl : layers)
        if (Pl.rows() != k || Pl.cols() != r)
            throw std::invalid_argument("build_sc_parity_check: layer shape mismatch");

    const std::size_t m = coupling.m;
    const std::size_t L = coupling.L;
    const bool tail_biting = coupling.mode == CouplingMode::TailBiting;

    const std::size_t time_slots = tail_biting ? L : L + m;
    const std::size_t total_cols = tail_biting ? n * L : n * L + m * r;

    // Column offset of the information/parity block of sub-frame t
    // (transmission order; tail frames carry parity only).
    auto info_col = [&](std::size_t t) { return t * n; };
    auto parity_col = [&](std::size_t t) {
        return t < L ? t * n + k : n * L + (t - L) * r;
    };

    std::vector<std::vector<std::vector<std::uint32_t>>> layer_cols;
    layer_cols.reserve(layers.size());
    for (const auto &Pl : layers) layer_cols.push_back(Pl.col_support());

    std::vector<std::vector<std::uint32_t>> support(time_slots * r);
    for (std::size_t t = 0; t < time_slots; ++t) {
        for (std::size_t j = 0; j < r; ++j) {
            auto &row = support[t * r + j];
            for (std::size_t ell = 0; ell <= m; ++ell) {
                std::size_t src;
                if (tail_biting) {
                    src = (t + L - (ell % L)) % L;
                    if (ell >= L) continue; // degenerate, excluded by L > m
                } else {
                    if (ell > t) continue;
                    src = t - ell;
                    if (src >= L) continue; // zero tail information
                }
                const std::size_t base = info_col(src);
                for (std::uint32_t i : layer_cols[ell][j])
                    row.push_back(static_cast<std::uint32_t>(base + i));
            }
            row.push_back(static_cast<std::uint32_t>(parity_col(t) + j));
        }
    }
    return SparseBitMatrix(time_slots * r, total_cols, std::move(support));
}

} // namespace ldgm
