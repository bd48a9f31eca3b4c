#pragma once

// Discrete W^{n,p} norms over domain masks, boundary normal fields with their
// arc-length parameterization, Besov norms of the normal along the boundary,
// and the window-wise comparison of the three boundary-regularity quantities
// (beta sums / chart difference seminorms / normal-field norm).

#include <vector>

#include "beurlab/approx.hpp"
#include "beurlab/geometry.hpp"
#include "beurlab/grid.hpp"

namespace beurlab {

struct NormalField {
    std::vector<double> x;       // chart abscissae
    std::vector<cplx> normal;    // N(x) = (A'(x) - i)/sqrt(1 + A'(x)^2)
    std::vector<double> tau;     // arc-length map tau(x) = int_0^x sqrt(1+A'^2)
};

// Unit outward normal and arc-length samples along a window chart; xs must be
// strictly increasing.  Throws on non-finite derivative samples.
NormalField normal_field(const Window& window, const std::vector<double>& xs);

struct SobolevReport {
    double lp = 0.0;      // ||f||_{L^p} over the domain cells
    double grad = 0.0;    // || sum_{|a|=n} |D^a f| ||_{L^p} over collar-stripped cells
    double total = 0.0;   // lp + grad
    double collar = 0.0;
    int order = 0;
    double p = 2.0;
    std::size_t cells_lp = 0;
    std::size_t cells_grad = 0;
    std::size_t cells_excluded = 0;  // domain cells dropped by the collar
};

// L^p part on all domain cells; n-th order centered differences on cells
// farther than `collar` from the complement.  Requires h < collar/4.
SobolevReport sobolev_norm(const GridFunction& f, const Domain& dom, int n, double p,
                           double collar);

// Besov norm of the outward unit normal along the boundary, arc-length
// parameterized: L^p part over the base window plus the difference-estimator
// seminorm of the (n-1)-st arc-length derivative, n = round(s + 1/p).
// Bounded domains are extended periodically; graph domains use the R-window.
double besov_norm_normal(const Domain& dom, double s, double p, int depth = 12);

struct NormBetaReport {
    double lhs = 0.0;  // sum_k sum_{I in (1/6)I_R} beta_n(A_k, I)^p / l(I)^{np-2}
    double mid = 0.0;  // sum_k chart difference-seminorm^p over (1/3)I_R
    double rhs = 0.0;  // normal-field Besov norm^p
    double ratio_lhs_mid = 0.0;
    double ratio_mid_rhs = 0.0;
    std::size_t windows = 0;
};

// Window-wise comparison of the boundary-smoothness quantities at degree n,
// exponent p, window scale R.
NormBetaReport lemma_norm_beta_check(const Domain& dom, int n, double p, double R,
                                     int depth = 10);

}  // namespace beurlab
