#pragma once

// Local polynomial approximation on intervals: L^2 best-fit polynomials,
// normalized beta coefficients measured on the tripled interval, iterated
// finite differences, and the two discretized Besov seminorms (beta-based and
// difference-based).

#include <functional>

#include "beurlab/geometry.hpp"

namespace beurlab {

using RealFn = std::function<double(double)>;
using CplxFn = std::function<cplx(double)>;

// Polynomial in powers of (x - center); the centered basis keeps coefficients
// well-scaled on small intervals.
struct Poly1D {
    double center = 0.0;
    std::vector<double> coeffs;  // coeffs[k] * (x - center)^k

    double operator()(double x) const;
    Poly1D derivative() const;
    int degree() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1; }
};

struct ApproxFit {
    Interval interval;                    // fit interval I
    int degree = 0;                       // n
    Poly1D poly;                          // R = argmin ||f - R||_{L^2(I)} over P_n
    std::vector<double> ortho_residuals;  // r_j = int_I (R - f) x^j, j = 0..n
    double l1_norm = 0.0;                 // ||f||_{L^1(I)}
    double l1_residual = 0.0;             // int_I |f - R| over the fit interval
    double sup_ratio = 0.0;               // sup_I |R| * |I| / ||f||_{L^1(I)}
};

// L^2(I)-projection of f onto polynomials of degree <= n, computed in an
// orthonormal (shifted-Legendre) basis with adaptive quadrature.
ApproxFit approx_poly(const RealFn& f, Interval I, int n);

struct BetaRecord {
    Interval interval;
    int degree = 0;
    double beta = 0.0;   // |I|^{-2} int_{3I} |f - R^n_{3I} f|
    ApproxFit fit;       // the fit over 3I
};

BetaRecord beta_coefficient(const RealFn& f, Interval I, int n);

// Iterated forward difference  sum_j (-1)^{i-j} C(i,j) f(z + j h).
double finite_difference(const RealFn& f, double z, double h, int order);
cplx finite_difference(const CplxFn& f, double z, double h, int order);

struct BesovBetaResult {
    double value = 0.0;              // (sum_I (beta / l^{s-1})^p l)^{1/p}
    std::vector<int> levels;         // dyadic levels visited
    std::vector<double> level_sums;  // per-level contribution to the p-th power
    std::size_t interval_count = 0;
};

// Beta-based estimator of the homogeneous Besov seminorm over the canonical
// dyadic intervals contained in `base`, truncated to `depth` levels.
BesovBetaResult besov_betas(const RealFn& f, double s, double p, int n, Interval base,
                            int depth);

struct BesovDiffResult {
    double value = 0.0;
    double h_min = 0.0, h_max = 0.0;
    int difference_order = 0;  // M
};

// Difference-based estimator: (int ||D^M_h f||_{L^p(W_h)}^q |h|^{-sq-1} dh)^{1/q}
// over h in +-[h_min, h_max], with W_h the shrunken window where all nodes fit.
BesovDiffResult besov_differences(const CplxFn& f, double s, double p, double q, int M,
                                  Interval window, int depth, int per_octave = 4);
BesovDiffResult besov_differences(const RealFn& f, double s, double p, double q, int M,
                                  Interval window, int depth, int per_octave = 4);

}  // namespace beurlab
