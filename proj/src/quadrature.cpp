#include "ldgm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ldgm {

namespace {

// Orthonormal Hermite recurrence (weight exp(-x^2)):
//   p0 = pi^(-1/4), p_{j+1} = x*sqrt(2/(j+1))*p_j - sqrt(j/(j+1))*p_{j-1},
//   p_n'(x) = sqrt(2n) p_{n-1}(x).
void hermite_eval(std::size_t n, double x, double &pn, double &pn_minus_1) {
    double pm1 = 0.0;
    double p = 0.75112554446494248286; // pi^(-1/4)
    for (std::size_t j = 0; j < n; ++j) {
        const double pnext =
            x * std::sqrt(2.0 / static_cast<double>(j + 1)) * p -
            std::sqrt(static_cast<double>(j) / static_cast<double>(j + 1)) * pm1;
        pm1 = p;
        p = pnext;
    }
    pn = p;
    pn_minus_1 = pm1;
}

QuadRule build_rule(std::size_t n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    // Bracket the n simple roots by scanning for sign changes.
    const double span = std::sqrt(2.0 * static_cast<double>(n) + 2.0);
    const std::size_t grid = 64 * n;
    std::vector<double> roots;
    roots.reserve(n);
    double prev_x = -span;
    double pn, pnm1;
    hermite_eval(n, prev_x, pn, pnm1);
    double prev_v = pn;
    for (std::size_t g = 1; g <= grid; ++g) {
        const double x = -span + 2.0 * span * static_cast<double>(g) / static_cast<double>(grid);
        hermite_eval(n, x, pn, pnm1);
        if ((prev_v < 0.0) != (pn < 0.0)) {
            // Newton refinement from the midpoint.
            double root = 0.5 * (prev_x + x);
            for (int it = 0; it < 60; ++it) {
                double f, fm1;
                hermite_eval(n, root, f, fm1);
                const double deriv = std::sqrt(2.0 * static_cast<double>(n)) * fm1;
                const double step = f / deriv;
                root -= step;
                if (std::abs(step) < 1e-15 * (1.0 + std::abs(root))) break;
            }
            roots.push_back(root);
        }
        prev_x = x;
        prev_v = pn;
    }
    if (roots.size() != n) throw std::runtime_error("gauss_hermite: root bracketing failed");

    QuadRule rule;
    rule.nodes = roots;
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Christoffel weight: 1 / sum_{j<n} p_j(x)^2.
        double pm1 = 0.0;
        double p = 0.75112554446494248286;
        double sum = p * p;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double pnext =
                roots[i] * std::sqrt(2.0 / static_cast<double>(j + 1)) * p -
                std::sqrt(static_cast<double>(j) / static_cast<double>(j + 1)) * pm1;
            pm1 = p;
            p = pnext;
            sum += p * p;
        }
        rule.weights[i] = 1.0 / sum;
    }
    return rule;
}

} // namespace

const QuadRule &gauss_hermite(std::size_t order) {
    static std::map<std::size_t, QuadRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

} // namespace ldgm
