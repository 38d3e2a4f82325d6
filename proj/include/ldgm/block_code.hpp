#ifndef LDGM_BLOCK_CODE_HPP
#define LDGM_BLOCK_CODE_HPP

#include <cstdint>
#include <vector>

#include "ldgm/channel.hpp"
#include "ldgm/ensemble.hpp"
#include "ldgm/sparse_bit_matrix.hpp"

namespace ldgm {

/// Systematic LDGM block code with generator [I P]. Holds the column
/// adjacency of P (per parity bit, the participating information bits),
/// which is exactly the transpose of P's row support. Immutable and safe
/// to share across concurrent decodes.
class BlockCode {
  public:
    BlockCode(EnsembleParams params, SparseBitMatrix P);

    const EnsembleParams &params() const { return params_; }
    const SparseBitMatrix &P() const { return P_; }
    std::size_t n() const { return params_.n; }
    std::size_t k() const { return params_.k; }
    std::size_t parity_bits() const { return params_.n - params_.k; }

    /// Column adjacency: info bits checked by parity bit j.
    const std::vector<std::vector<std::uint32_t>> &checks() const { return checks_; }
    /// Edge ids (indices into the check-major edge array) per info bit.
    const std::vector<std::vector<std::uint32_t>> &var_edges() const { return var_edges_; }
    /// check_offset()[j] .. check_offset()[j+1] index the edges of check j.
    const std::vector<std::uint32_t> &check_offset() const { return check_offset_; }
    /// Info-bit index of each edge, check-major order.
    const std::vector<std::uint32_t> &edge_info() const { return edge_info_; }
    std::size_t edge_count() const { return edge_info_.size(); }

  private:
    EnsembleParams params_;
    SparseBitMatrix P_;
    std::vector<std::vector<std::uint32_t>> checks_;
    std::vector<std::vector<std::uint32_t>> var_edges_;
    std::vector<std::uint32_t> check_offset_;
    std::vector<std::uint32_t> edge_info_;
};

/// Helper: sample a code from the ensemble.
BlockCode make_block_code(const EnsembleParams &params);

struct DecodeOutcome {
    BitVec bits;             // decided information bits; 0 whenever APP >= 0
    std::vector<double> app; // a-posteriori LLRs of the information bits
    int iterations = 0;
    bool converged = false;
};

/// Systematic encoding: c = (u, u P) over GF(2).
BitVec encode_block(const BitVec &u, const BlockCode &code);

/// Sum-product BP over the code's normal graph, flooding schedule
/// (equality nodes first, then check nodes), channel LLRs pinned on the
/// half-edges. Stops early once the hard decision satisfies every parity
/// check.
DecodeOutcome decode_block(const LlrWord &llr, const BlockCode &code, int i_max);

struct SoftDecodeResult {
    DecodeOutcome outcome;
    std::vector<double> info_extrinsic;   // APP minus the prior, per info bit
    std::vector<double> parity_extrinsic; // check-to-parity messages, channel excluded
};

/// Soft-in soft-out variant: information-bit equality nodes additionally
/// absorb `prior` (length k). A zero prior reduces exactly to decode_block.
SoftDecodeResult decode_block_soft(const LlrWord &llr, const BlockCode &code,
                                   const std::vector<double> &prior, int i_max);

} // namespace ldgm

#endif
