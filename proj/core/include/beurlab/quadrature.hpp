#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace beurlab {

// Gauss-Legendre rule on [-1, 1].  Nodes/weights are computed once per order
// (Newton iteration on the Legendre recurrence) and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

// Integrate f over [a, b] with a single Gauss-Legendre panel.
template <typename F>
auto integrate_gl(F&& f, double a, double b, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    using R = decltype(f(mid));
    R acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return acc * half;
}

// Adaptive bisection driven by comparing an order-p panel against two
// order-p half panels.  abs_floor guards against endless refinement of
// integrals whose true value is ~0.
template <typename F>
auto integrate_adaptive(F&& f, double a, double b, double rel_tol,
                        double abs_floor, int max_depth = 48, int order = 12) {
    using R = decltype(f(a));
    struct Frame {
        double a, b;
        R coarse;
        int depth;
    };
    R whole = integrate_gl(f, a, b, order);
    std::vector<Frame> stack{{a, b, whole, 0}};
    R total{};
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        const double m = 0.5 * (fr.a + fr.b);
        R left = integrate_gl(f, fr.a, m, order);
        R right = integrate_gl(f, m, fr.b, order);
        R fine = left + right;
        const double err = std::abs(fine - fr.coarse);
        if (err <= rel_tol * std::abs(fine) + abs_floor || fr.depth >= max_depth) {
            total += fine;
        } else {
            stack.push_back({fr.a, m, left, fr.depth + 1});
            stack.push_back({m, fr.b, right, fr.depth + 1});
        }
    }
    return total;
}

// Legendre polynomial value/derivative pair used by the node solver.
std::pair<double, double> legendre_pd(int order, double x);

}  // namespace beurlab
