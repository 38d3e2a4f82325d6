#ifndef LDGM_SC_CODE_HPP
#define LDGM_SC_CODE_HPP

#include <cstdint>
#include <vector>

#include "ldgm/block_code.hpp"
#include "ldgm/channel.hpp"
#include "ldgm/ensemble.hpp"

namespace ldgm {

/// Convolutional (spatially coupled) systematic LDGM code: the base block
/// code's P is split into layers P_0..P_m whose supports partition it, and
/// sub-frame t carries parity sum_l u^(t-l) P_l.
class ScCode {
  public:
    ScCode(BlockCode base, std::vector<SparseBitMatrix> layers, CouplingParams coupling);

    const BlockCode &base() const { return base_; }
    const std::vector<SparseBitMatrix> &layers() const { return layers_; }
    const CouplingParams &coupling() const { return coupling_; }

    std::size_t n() const { return base_.n(); }
    std::size_t k() const { return base_.k(); }
    std::size_t m() const { return coupling_.m; }
    std::size_t L() const { return coupling_.L; }
    bool tail_biting() const { return coupling_.mode == CouplingMode::TailBiting; }

    /// Number of chain layers carrying a parity sub-frame.
    std::size_t chain_length() const { return tail_biting() ? L() : L() + m(); }
    /// Emitted bits per frame: nL + m(n-k) terminated, nL tail-biting.
    std::size_t frame_bits() const;
    /// kL / frame_bits (terminated) resp. k/n (tail-biting).
    double rate() const;

  private:
    BlockCode base_;
    std::vector<SparseBitMatrix> layers_;
    CouplingParams coupling_;
};

/// Convenience: sample P, split it, assemble the coupled code.
ScCode make_sc_code(const EnsembleParams &params, const CouplingParams &coupling);

/// Encode kL information bits. Terminated mode emits L sub-frames
/// (u^(t), p^(t)) of n bits followed by m parity-only tail sub-frames of
/// n-k bits (the zero tail information bits are not transmitted).
/// Tail-biting mode emits exactly nL bits with indices taken modulo L.
BitVec encode_sc(const BitVec &u, const ScCode &code);

struct ScDecodeOptions {
    int j_max = 18;            // global iterations per window position
    int d = -1;                // window delay; -1 selects the default 2m
    double entropy_eps = 1e-5; // stopping threshold on mean bit entropy
    bool cancellation = true;  // subtract decided layers from later parities
};

/// Per-layer message buffers of the sliding-window decoder. The active
/// window spans layer indices [start, end] with end = min(start + d,
/// chain_length - 1).
struct WindowLayer {
    std::vector<double> chan_info;   // k; +LLR_MAX for the known zero tail
    std::vector<double> chan_parity; // n-k; sign-adjusted by cancellation
    // Indexed by coupling offset l = 0..m:
    std::vector<std::vector<double>> rep_to_gen;    // [m+1][k]
    std::vector<std::vector<double>> gen_to_sum;    // [m+1][n-k]
    std::vector<std::vector<double>> sum_to_gen;    // [m+1][n-k]
    std::vector<std::vector<double>> check_to_info; // [m+1][nnz(P_l)]
    std::vector<std::vector<double>> info_total;    // [m+1][k], per-bit sums of check_to_info
};

struct WindowState {
    std::size_t start = 0;
    std::size_t end = 0;
    std::vector<WindowLayer> layers; // one buffer per chain layer
};

/// Iterative sliding-window decoding. `layer_llrs` holds one LlrWord per
/// chain layer: n values for data layers, n-k for the parity-only tail.
/// Returns one outcome per data layer, decided in causal order.
std::vector<DecodeOutcome> decode_sc(const std::vector<LlrWord> &layer_llrs, const ScCode &code,
                                     const ScDecodeOptions &options = {});

/// Mean-bit-entropy stopping rule: true iff
/// (1/k) sum_i H_b(1/(1+e^{|llr_i|})) < eps.
bool entropy_stop(const std::vector<double> &app_llrs, double eps);

/// Slice a whole-frame LLR word (in transmission order) into the per-layer
/// words decode_sc expects.
std::vector<LlrWord> split_frame_llrs(const LlrWord &frame, const ScCode &code);

} // namespace ldgm

#endif
