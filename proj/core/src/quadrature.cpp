#include "beurlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace beurlab {

std::pair<double, double> legendre_pd(int order, double x) {
    double p0 = 1.0, p1 = x;
    if (order == 0) return {1.0, 0.0};
    for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    // derivative from the standard relation (1-x^2) P_n' = n (P_{n-1} - x P_n)
    double d = order * (p0 - x * p1) / (1.0 - x * x);
    return {p1, d};
}

const GaussRule& gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-like initial guess, then Newton.
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double p, d;
        for (int iter = 0; iter < 100; ++iter) {
            std::tie(p, d) = legendre_pd(order, x);
            double dx = p / d;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        std::tie(p, d) = legendre_pd(order, x);
        const double w = 2.0 / ((1.0 - x * x) * d * d);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[order - 1 - i] = x;
        rule.weights[order - 1 - i] = w;
    }
    auto [pos, ok] = cache.emplace(order, std::move(rule));
    (void)ok;
    return pos->second;
}

}  // namespace beurlab
