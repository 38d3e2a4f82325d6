#ifndef LDGM_QUADRATURE_HPP
#define LDGM_QUADRATURE_HPP

#include <cstddef>
#include <vector>

namespace ldgm {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Hermite rule for the weight function exp(-x^2):
///   integral exp(-x^2) f(x) dx  ~=  sum w_i f(x_i).
/// Nodes are roots of the order-n Hermite polynomial (Newton refinement on
/// grid brackets); weights come from the Christoffel sum of the orthonormal
/// recurrence. Rules are cached per order.
const QuadRule &gauss_hermite(std::size_t order);

/// E[f(Y)] for Y ~ N(mean, sigma^2) using the cached Gauss-Hermite rule.
template <typename F>
double gauss_expectation(F &&f, double mean, double sigma, std::size_t order) {
    const QuadRule &rule = gauss_hermite(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mean + 1.4142135623730951 * sigma * rule.nodes[i]);
    return acc * 0.5641895835477563; // 1/sqrt(pi)
}

} // namespace ldgm

#endif
