#ifndef LDGM_LLR_MATH_HPP
#define LDGM_LLR_MATH_HPP

#include <cmath>

#include "ldgm/channel.hpp"

namespace ldgm {

/// Inputs below this magnitude are treated as exact erasures in check-node
/// updates, so sign noise from underflowed messages cannot propagate.
inline constexpr double LLR_ERASURE_EPS = 1e-12;

inline double tanh_half(double llr) {
    if (std::abs(llr) < LLR_ERASURE_EPS) return 0.0;
    return std::tanh(clamp_llr(llr) * 0.5);
}

/// 2*atanh(t) clamped to [-LLR_MAX, LLR_MAX].
inline double llr_from_tanh(double t) {
    if (t >= 1.0) return LLR_MAX;
    if (t <= -1.0) return -LLR_MAX;
    return clamp_llr(std::log1p(t) - std::log1p(-t));
}

} // namespace ldgm

#endif
