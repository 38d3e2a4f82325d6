#include "ldgm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ldgm/quadrature.hpp"

namespace ldgm {

namespace {

constexpr double NEG_INF = -std::numeric_limits<double>::infinity();
constexpr double PROB_FLOOR = 1e-300;
constexpr std::size_t QUAD_ORDER = 127;

double log_binom(std::size_t n, std::size_t k) {
    if (k > n) return NEG_INF;
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

double lse(double a, double b) {
    if (a == NEG_INF) return b;
    if (b == NEG_INF) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double to_prob(double log_value) {
    if (log_value == NEG_INF) return 0.0;
    const double v = std::exp(log_value);
    return v < PROB_FLOOR && log_value < std::log(PROB_FLOOR) ? PROB_FLOOR : v;
}

void check_rho(double rho) {
    if (!(rho >= 0.0 && rho <= 0.5))
        throw std::invalid_argument("analysis: need 0 <= rho <= 1/2");
}

} // namespace

double rho_w(double rho, std::uint64_t w) {
    check_rho(rho);
    if (w == 0) throw std::invalid_argument("rho_w: w >= 1 required");
    return (1.0 - std::pow(1.0 - 2.0 * rho, static_cast<double>(w))) / 2.0;
}

double log_irwef_coeff(std::size_t n, std::size_t k, double rho, std::size_t i, std::size_t j) {
    check_rho(rho);
    if (i < 1 || i > k || j > n - k)
        throw std::invalid_argument("log_irwef_coeff: index out of range");
    const double ri = rho_w(rho, i);
    const std::size_t r = n - k;
    double v = log_binom(k, i) + log_binom(r, j);
    if (j > 0) v += ri > 0.0 ? static_cast<double>(j) * std::log(ri) : NEG_INF;
    if (r - j > 0) v += ri < 1.0 ? static_cast<double>(r - j) * std::log1p(-ri) : NEG_INF;
    return v;
}

double q_func(double x) { return 0.5 * std::erfc(x * 0.7071067811865476); }

double log_q_func(double x) {
    if (x < 35.0) {
        const double q = q_func(x);
        if (q > 0.0) return std::log(q);
    }
    // Asymptotic series: Q(x) = phi(x)/x * (1 - 1/x^2 + 3/x^4 - ...).
    const double inv2 = 1.0 / (x * x);
    double term = 1.0, series = 1.0;
    double coeff = 1.0;
    for (int j = 1; j <= 8; ++j) {
        coeff *= static_cast<double>(2 * j - 1);
        term *= -inv2;
        series += coeff * term;
    }
    return -0.5 * x * x - std::log(x) - 0.9189385332046727 + std::log(series);
}

double log_pep(const ChannelModel &ch, std::uint64_t d, PepMethod method) {
    if (d == 0) throw std::invalid_argument("pep: d >= 1 required");
    const double dd = static_cast<double>(d);
    if (method == PepMethod::Bhattacharyya) {
        const double z = bhattacharyya(ch);
        return z > 0.0 ? dd * std::log(z) : NEG_INF;
    }
    switch (ch.kind()) {
        case ChannelKind::Bec: {
            const double alpha = ch.param();
            return alpha > 0.0 ? dd * std::log(alpha) : NEG_INF;
        }
        case ChannelKind::Bsc: {
            // Tail sum over i >= ceil(d/2) flipped positions; the tie at
            // i = d/2 counts fully.
            const double p = ch.param();
            if (p == 0.0) return NEG_INF;
            if (p == 0.5) return 0.0; // likelihood ratio is 1 everywhere: all ties
            const double lp = std::log(p);
            const double lq = std::log1p(-p);
            double acc = NEG_INF;
            for (std::uint64_t i = (d + 1) / 2; i <= d; ++i)
                acc = lse(acc, log_binom(d, i) + static_cast<double>(i) * lp +
                                   static_cast<double>(d - i) * lq);
            return acc;
        }
        case ChannelKind::BiAwgn:
            return log_q_func(std::sqrt(dd) / ch.param());
    }
    return NEG_INF;
}

double pep(const ChannelModel &ch, std::uint64_t d, PepMethod method) {
    return std::min(1.0, std::exp(log_pep(ch, d, method)));
}

namespace {

// log of the lower-bound sum over the row-weight law.
double log_lower_bound(std::size_t n, std::size_t k, double rho, const ChannelModel &ch,
                       PepMethod method) {
    const std::size_t r = n - k;
    const double lrho = rho > 0.0 ? std::log(rho) : NEG_INF;
    const double lrho1 = rho < 1.0 ? std::log1p(-rho) : NEG_INF;
    double acc = NEG_INF;
    for (std::size_t w = 0; w <= r; ++w) {
        double lw = log_binom(r, w);
        if (w > 0) lw += lrho == NEG_INF ? NEG_INF : static_cast<double>(w) * lrho;
        if (r - w > 0) lw += static_cast<double>(r - w) * lrho1;
        if (lw == NEG_INF) continue;
        acc = lse(acc, lw + log_pep(ch, w + 1, method));
    }
    return acc;
}

} // namespace

BoundsReport ber_lower_bound(std::size_t n, std::size_t k, double rho, const ChannelModel &ch,
                             PepMethod method) {
    check_rho(rho);
    BoundsReport report;
    report.channel = ch.spec_string();
    report.method = method;
    report.lower = to_prob(log_lower_bound(n, k, rho, ch, method));
    return report;
}

BoundsReport ber_upper_bound(std::size_t n, std::size_t k, double rho, const ChannelModel &ch,
                             PepMethod method) {
    check_rho(rho);
    const std::size_t r = n - k;
    const double log_k = std::log(static_cast<double>(k));

    // log PEP(d) for every relevant total weight.
    std::vector<double> lp(n + 1, NEG_INF);
    for (std::size_t d = 1; d <= n; ++d) lp[d] = log_pep(ch, d, method);

    // First sum's per-i inner terms (i/k) * sum_j A_ij PEP(i+j).
    std::vector<double> term1(k + 1, NEG_INF);
    for (std::size_t i = 1; i <= k; ++i) {
        const double ri = rho_w(rho, i);
        const double lri = ri > 0.0 ? std::log(ri) : NEG_INF;
        const double lri1 = ri < 1.0 ? std::log1p(-ri) : NEG_INF;
        const double lcki = log_binom(k, i);
        double inner = NEG_INF;
        for (std::size_t j = 0; j <= r; ++j) {
            double la = lcki + log_binom(r, j);
            if (j > 0) la += lri == NEG_INF ? NEG_INF : static_cast<double>(j) * lri;
            if (r - j > 0) la += lri1 == NEG_INF ? NEG_INF : static_cast<double>(r - j) * lri1;
            if (la == NEG_INF) continue;
            inner = lse(inner, la + lp[i + j]);
        }
        term1[i] = std::log(static_cast<double>(i)) - log_k + inner;
    }
    // Prefix logsumexp over i for the first sum.
    std::vector<double> prefix1(k + 1, NEG_INF);
    for (std::size_t i = 1; i <= k; ++i) prefix1[i] = lse(prefix1[i - 1], term1[i]);

    // Binomial(k, PEP(1)) log pmf for the second sum.
    const double lpep1 = lp[1];
    const double lpep1c = lpep1 == NEG_INF ? 0.0 : std::log1p(-std::exp(lpep1));
    std::vector<double> lpmf(k + 1, NEG_INF);
    for (std::size_t i = 1; i <= k; ++i) {
        if (lpep1 == NEG_INF) break; // noiseless: second sum vanishes
        double v = log_binom(k, i) + static_cast<double>(i) * lpep1;
        if (k - i > 0) v += static_cast<double>(k - i) * lpep1c;
        lpmf[i] = v;
    }

    double best_log = std::numeric_limits<double>::infinity();
    std::size_t best_r = 0;
    for (std::size_t rs = 0; rs <= k; ++rs) {
        const std::size_t cap1 = std::min(2 * rs, k);
        double total = prefix1[cap1];
        for (std::size_t i = rs + 1; i <= k; ++i) {
            if (lpmf[i] == NEG_INF) continue;
            const std::size_t weight = std::min(i + rs, k);
            total = lse(total, std::log(static_cast<double>(weight)) - log_k + lpmf[i]);
        }
        if (total < best_log) {
            best_log = total;
            best_r = rs;
        }
    }

    BoundsReport report;
    report.channel = ch.spec_string();
    report.method = method;
    report.upper = std::min(1.0, to_prob(best_log));
    report.r_star = static_cast<int>(best_r);
    return report;
}

BoundsReport ber_bounds(std::size_t n, std::size_t k, double rho, const ChannelModel &ch,
                        PepMethod method) {
    BoundsReport report = ber_upper_bound(n, k, rho, ch, method);
    report.lower = ber_lower_bound(n, k, rho, ch, method).lower;
    return report;
}

double error_exponent_e0(const ChannelModel &ch, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("error_exponent_e0: need 0 <= gamma <= 1");
    const double s = 1.0 / (1.0 + gamma);
    switch (ch.kind()) {
        case ChannelKind::Bec: {
            const double alpha = ch.param();
            return -std::log2(alpha + (1.0 - alpha) * std::pow(2.0, -gamma));
        }
        case ChannelKind::Bsc: {
            const double p = ch.param();
            if (p == 0.0) return gamma;
            return gamma -
                   (1.0 + gamma) * std::log2(std::pow(p, s) + std::pow(1.0 - p, s));
        }
        case ChannelKind::BiAwgn: {
            // Factor P(y|0) out of the bracket: the integrand becomes
            // N(y;1,sigma^2) [1/2 + 1/2 exp(-2 y s / sigma^2)]^(1+gamma).
            const double sigma = ch.param();
            const double scale = 2.0 * s / (sigma * sigma);
            const double integral = gauss_expectation(
                [&](double y) {
                    const double ratio = std::exp(-scale * y);
                    return std::pow(0.5 + 0.5 * ratio, 1.0 + gamma);
                },
                1.0, sigma, QUAD_ORDER);
            return -std::log2(integral);
        }
    }
    return 0.0;
}

double random_coding_exponent(const ChannelModel &ch, double rate, double *gamma_star) {
    // Coarse grid, then golden-section refinement; E_0(gamma) - gamma R is
    // concave in gamma, so the local maximum is global.
    constexpr double GRID_STEP = 1e-3;
    double best = -std::numeric_limits<double>::infinity();
    double best_gamma = 0.0;
    for (int g = 0; g * GRID_STEP <= 1.0 + 1e-12; ++g) {
        const double gamma = std::min(1.0, g * GRID_STEP);
        const double v = error_exponent_e0(ch, gamma) - gamma * rate;
        if (v > best) {
            best = v;
            best_gamma = gamma;
        }
    }
    double lo = std::max(0.0, best_gamma - GRID_STEP);
    double hi = std::min(1.0, best_gamma + GRID_STEP);
    constexpr double INV_PHI = 0.6180339887498949;
    double x1 = hi - INV_PHI * (hi - lo);
    double x2 = lo + INV_PHI * (hi - lo);
    double f1 = error_exponent_e0(ch, x1) - x1 * rate;
    double f2 = error_exponent_e0(ch, x2) - x2 * rate;
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = error_exponent_e0(ch, x2) - x2 * rate;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = error_exponent_e0(ch, x1) - x1 * rate;
        }
    }
    const double gm = 0.5 * (lo + hi);
    const double refined = error_exponent_e0(ch, gm) - gm * rate;
    const double er = std::max(0.0, std::max(best, refined));
    if (gamma_star) *gamma_star = refined >= best ? gm : best_gamma;
    return er;
}

ExponentReport er_bound(std::size_t n, std::size_t k, double rho, const ChannelModel &ch) {
    check_rho(rho);
    ExponentReport report;
    const double rate = static_cast<double>(k) / static_cast<double>(n);
    report.rate = rate;

    constexpr double GRID_STEP = 1e-3;
    for (int g = 0; g * GRID_STEP <= 1.0 + 1e-12; ++g) {
        const double gamma = std::min(1.0, g * GRID_STEP);
        report.gamma_grid.push_back(gamma);
        report.e0_grid.push_back(error_exponent_e0(ch, gamma));
    }
    report.er_at_rate = random_coding_exponent(ch, rate, &report.gamma_star);

    const double nn = static_cast<double>(n);
    const double base = 1.0 - 2.0 * rho;
    report.best_bound = std::numeric_limits<double>::infinity();
    bool saturated = false;
    for (std::size_t T = 1; T <= k; ++T) {
        double r_tilde;
        bool fresh = true;
        if (!saturated) {
            const double excess = std::pow(base, static_cast<double>(T));
            r_tilde = (1.0 - rate) * std::log2(1.0 + excess) + rate;
            if (excess < 1e-16) saturated = true;
        } else {
            r_tilde = rate;
            fresh = false;
        }
        const double er = fresh ? random_coding_exponent(ch, r_tilde) : report.er_at_rate;
        const double bound =
            static_cast<double>(T) / (nn * rate) + std::exp2(-nn * er);
        report.entries.push_back({T, r_tilde, er, bound});
        if (bound < report.best_bound) {
            report.best_bound = bound;
            report.best_T = T;
        }
        // Once R~ has saturated the bound only grows with T.
        if (saturated && bound > report.best_bound) break;
    }
    return report;
}

DeTrace de_bec(std::size_t n, std::size_t k, double rho, double alpha, double tol,
               std::size_t max_iter) {
    check_rho(rho);
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("de_bec: need 0 <= alpha <= 1");
    DeTrace trace;
    trace.alpha = alpha;
    const double re = static_cast<double>(n - k - 1);
    const double ke = static_cast<double>(k - 1);
    double eta = 1.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        const double eps = alpha * std::pow(1.0 - rho * (1.0 - eta), re);
        const double eta_next = 1.0 - (1.0 - alpha) * std::pow(1.0 - rho * eps, ke);
        trace.steps.push_back({eps, eta_next});
        trace.iterations = it + 1;
        const bool done = std::abs(eta_next - eta) < tol;
        eta = eta_next;
        if (done) {
            trace.converged = true;
            break;
        }
    }
    trace.eta_star = eta;
    trace.beta = alpha * std::pow(1.0 - rho * (1.0 - eta), re + 1.0);
    return trace;
}

} // namespace ldgm
