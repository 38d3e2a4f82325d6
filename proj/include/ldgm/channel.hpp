#ifndef LDGM_CHANNEL_HPP
#define LDGM_CHANNEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ldgm/sparse_bit_matrix.hpp"

namespace ldgm {

/// LLR saturation magnitude. 30 corresponds to a probability floor near
/// 1e-13, small enough not to disturb bounds at simulated BERs >= 1e-8 while
/// keeping tanh-domain updates away from overflow.
inline constexpr double LLR_MAX = 30.0;

inline double clamp_llr(double v) {
    if (v > LLR_MAX) return LLR_MAX;
    if (v < -LLR_MAX) return -LLR_MAX;
    return v;
}

/// Per-bit log-likelihood ratios log(P(y|0)/P(y|1)) for one frame.
/// Positive means bit 0 is more likely; an erasure is exactly 0.
struct LlrWord {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

enum class ChannelKind { Bec, Bsc, BiAwgn };

/// Binary-input output-symmetric memoryless channel:
/// BEC(alpha), BSC(p) or BPSK over AWGN with noise deviation sigma.
class ChannelModel {
  public:
    static ChannelModel bec(double alpha);
    static ChannelModel bsc(double p);
    static ChannelModel bi_awgn(double sigma);
    /// sigma from Eb/N0 in dB at total code rate R: sigma^2 = 1/(2 R 10^(dB/10)).
    static ChannelModel bi_awgn_ebn0(double ebn0_db, double rate);

    ChannelKind kind() const { return kind_; }
    double param() const { return param_; } // alpha, p, or sigma

    std::string spec_string() const;

  private:
    ChannelModel(ChannelKind kind, double param) : kind_(kind), param_(param) {}
    ChannelKind kind_;
    double param_;
};

/// Transmit a codeword and return the channel LLRs. BPSK maps bit b to
/// 1-2b with unit energy. Deterministic given (c, ch, seed).
LlrWord transmit(const BitVec &c, const ChannelModel &ch, std::uint64_t seed);

/// Bhattacharyya parameter z = sum_y sqrt(P(y|0) P(y|1)).
double bhattacharyya(const ChannelModel &ch);

/// Channel capacity in bits per use at uniform input. The AWGN case uses
/// Gauss-Hermite quadrature (127 nodes) of the mutual-information integral.
double capacity(const ChannelModel &ch);

/// Parse `bec:0.45`, `bsc:0.05`, `awgn-sigma:0.9` or `awgn-ebn0:2.0` (dB).
/// The Eb/N0 form needs the total code rate for the sigma conversion.
ChannelModel parse_channel_spec(const std::string &spec, double rate);

} // namespace ldgm

#endif
