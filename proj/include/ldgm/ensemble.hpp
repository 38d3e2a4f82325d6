#ifndef LDGM_ENSEMBLE_HPP
#define LDGM_ENSEMBLE_HPP

#include <cstdint>
#include <vector>

#include "ldgm/sparse_bit_matrix.hpp"

namespace ldgm {

/// Parameters of the systematic random code ensemble: generator G = [I P]
/// with P of size k x (n-k) and i.i.d. Bernoulli(rho) entries.
struct EnsembleParams {
    std::size_t n = 0;   // code length
    std::size_t k = 0;   // dimension
    double rho = 0.0;    // Bernoulli success probability, 0 < rho <= 1/2
    std::uint64_t seed = 0;

    void validate() const;
};

enum class CouplingMode { Terminated, TailBiting };

/// Spatial-coupling parameters: memory m, data block count L.
struct CouplingParams {
    std::size_t m = 0;
    std::size_t L = 1;
    CouplingMode mode = CouplingMode::Terminated;
    std::uint64_t split_seed = 0;

    void validate() const;
};

/// Sample the k x (n-k) parity-generator matrix; entries are 1 independently
/// with probability rho. Deterministic for a fixed seed.
SparseBitMatrix gen_parity_matrix(const EnsembleParams &params);

/// Randomly split P into m+1 layers P_0..P_m: each nonzero of P is assigned
/// to exactly one layer, uniformly over {0..m}. The layer supports partition
/// the support of P, so XOR of all layers gives back P.
std::vector<SparseBitMatrix> split_matrix(const SparseBitMatrix &P, const CouplingParams &coupling);

/// Block parity-check matrix H = [P^T I] of size (n-k) x n.
SparseBitMatrix build_block_parity_check(const SparseBitMatrix &P);

/// Banded parity-check matrix of the coupled code, with columns in
/// transmission order: L sub-frames (u^(t), p^(t)) of n bits followed by the
/// m parity-only tail frames (terminated mode). Row block t holds P_l^T at
/// the information columns of sub-frame t-l and an identity at the parity
/// columns of sub-frame t. Tail-biting mode wraps the band modulo L and has
/// exactly nL columns.
SparseBitMatrix build_sc_parity_check(const std::vector<SparseBitMatrix> &layers,
                                      const CouplingParams &coupling,
                                      std::size_t n, std::size_t k);

} // namespace ldgm

#endif
