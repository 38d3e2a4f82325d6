#ifndef LDGM_ANALYSIS_HPP
#define LDGM_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldgm/channel.hpp"

namespace ldgm {

/// P(parity bit = 1 | information weight w) = (1 - (1-2 rho)^w) / 2.
/// Requires w >= 1.
double rho_w(double rho, std::uint64_t w);

/// Natural log of the ensemble input-redundancy weight enumerator
/// coefficient A_ij = C(k,i) C(n-k,j) rho_i^j (1-rho_i)^(n-k-j),
/// for 1 <= i <= k and 0 <= j <= n-k. Computed with log-gamma binomials.
double log_irwef_coeff(std::size_t n, std::size_t k, double rho, std::size_t i, std::size_t j);

enum class PepMethod { ExactPep, Bhattacharyya };

/// Pairwise error probability that a weight-d codeword is at least as
/// likely as the transmitted all-zero word. Exact per channel family
/// (AWGN: Q(sqrt(d)/sigma); BSC: binomial tail with ties counted; BEC:
/// alpha^d) or the Bhattacharyya proxy z^d. Requires d >= 1.
double pep(const ChannelModel &ch, std::uint64_t d, PepMethod method = PepMethod::ExactPep);
/// Natural log of pep(); usable far below double underflow.
double log_pep(const ChannelModel &ch, std::uint64_t d, PepMethod method = PepMethod::ExactPep);

/// Upper Gaussian tail Q(x) with relative accuracy ~1e-12, and its log.
double q_func(double x);
double log_q_func(double x);

struct BoundsReport {
    std::string channel;
    std::optional<double> lower;
    std::optional<double> upper;
    int r_star = -1;                          // split parameter of the upper bound
    PepMethod method = PepMethod::ExactPep;
};

/// Ensemble MAP-BER upper bound: minimum over the split parameter r* of the
/// two-sum expression (IRWEF term up to weight 2 r*, binomial tail above).
BoundsReport ber_upper_bound(std::size_t n, std::size_t k, double rho, const ChannelModel &ch,
                             PepMethod method = PepMethod::ExactPep);

/// Ensemble MAP-BER lower bound sum_w P_W(w+1) PEP(w+1), where P_W(w+1)
/// is the row-weight law C(n-k,w) rho^w (1-rho)^(n-k-w).
BoundsReport ber_lower_bound(std::size_t n, std::size_t k, double rho, const ChannelModel &ch,
                             PepMethod method = PepMethod::ExactPep);

/// Both bounds in one report.
BoundsReport ber_bounds(std::size_t n, std::size_t k, double rho, const ChannelModel &ch,
                        PepMethod method = PepMethod::ExactPep);

/// Gallager E_0(gamma) in bits for the symmetric input distribution:
/// -log2 sum_y [ 1/2 P(y|0)^(1/(1+gamma)) + 1/2 P(y|1)^(1/(1+gamma)) ]^(1+gamma).
double error_exponent_e0(const ChannelModel &ch, double gamma);

/// Random-coding exponent E_r(R) = max_{0<=gamma<=1} [E_0(gamma) - gamma R],
/// coarse 1e-3 grid refined by golden section to 1e-6.
double random_coding_exponent(const ChannelModel &ch, double rate, double *gamma_star = nullptr);

struct ExponentReport {
    double rate = 0.0;
    std::vector<double> gamma_grid;
    std::vector<double> e0_grid;
    struct Entry {
        std::size_t T;
        double r_tilde; // (1-R) log2(1 + (1-2rho)^T) + R
        double er;      // E_r(r_tilde)
        double bound;   // T/(nR) + 2^(-n er)
    };
    std::vector<Entry> entries;
    double er_at_rate = 0.0;
    double gamma_star = 0.0;
    double best_bound = 1.0;
    std::size_t best_T = 0;
};

/// Finite-n ensemble BER bound min_T { T/(nR) + 2^(-n E_r(R~(T))) } scanned
/// over T = 1..k.
ExponentReport er_bound(std::size_t n, std::size_t k, double rho, const ChannelModel &ch);

struct DeTrace {
    double alpha = 0.0;
    struct Step {
        double eps; // erasure probability out of the equality nodes
        double eta; // erasure probability out of the check nodes (next)
    };
    std::vector<Step> steps;
    double eta_star = 1.0;
    double beta = 1.0; // output erasure probability estimate
    std::size_t iterations = 0;
    bool converged = false;
};

/// Density evolution on the BEC: eta^(0)=1,
/// eps = alpha (1 - rho(1-eta))^(n-k-1), eta' = 1 - (1-alpha)(1 - rho eps)^(k-1),
/// iterated to |d eta| < tol; beta = alpha (1 - rho(1-eta*))^(n-k).
DeTrace de_bec(std::size_t n, std::size_t k, double rho, double alpha, double tol = 1e-12,
               std::size_t max_iter = 100000);

} // namespace ldgm

#endif
