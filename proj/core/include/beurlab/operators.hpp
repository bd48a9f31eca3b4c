#pragma once

// Point evaluation of the kernel family T^g f(z) = p.v. integral of
// (z-w)^{g1} conj(z-w)^{g2} f(w) dm(w), three independent routes:
//
//   * t_char_pv      — polar-ring principal-value quadrature around z.  Full
//                      rings inside the domain cancel exactly for g1 != g2,
//                      so radial integration starts at the inscribed radius;
//                      partial rings use exact per-arc angular integrals.
//   * t_char_contour — Green reduction to a boundary integral; polygonal
//                      pieces use a closed-form antiderivative, curved pieces
//                      adaptive quadrature; unbounded domains are truncated
//                      with an explicit reported tail bound.
//   * ConvOperator   — grid/FFT route (fft_ops.hpp) for smooth data.
//
// The routes are cross-checked in the test suite; disagreements beyond the
// reported error estimates are treated as bugs.

#include <functional>
#include <utility>
#include <vector>

#include "beurlab/approx.hpp"
#include "beurlab/fft_ops.hpp"
#include "beurlab/geometry.hpp"

namespace beurlab {

struct MultiIndex {
    int g1 = 0;
    int g2 = 0;

    int homogeneity() const { return g1 + g2; }
    int modulus() const { return (g1 < 0 ? -g1 : g1) + (g2 < 0 ? -g2 : g2); }
    MultiIndex mirrored() const { return {g2, g1}; }
    MultiIndex operator-(MultiIndex o) const { return {g1 - o.g1, g2 - o.g2}; }
    bool operator==(const MultiIndex&) const = default;
};

// Integer power by squaring, valid for negative exponents (z != 0).
cplx ipow(cplx z, int k);

// kernel(g, z) = z^{g1} * conj(z)^{g2}; throws on z == 0.
cplx kernel(MultiIndex g, cplx z);

enum class EvalMethod { pv_quadrature, contour, closed_form, fft };

struct EvalResult {
    cplx value{};
    EvalMethod method = EvalMethod::pv_quadrature;
    double error = 0.0;  // quadrature + truncation-tail estimate
};

struct PvOptions {
    // Decreasing exclusion radii; the reported value is the last entry's and
    // the stabilization of the tail of the schedule is enforced.  Empty means
    // {2d, d, d/2, d/4} with d = dist(z, boundary).
    std::vector<double> eps_schedule;
    double r_max = 1e9;         // outer truncation for unbounded domains
    double rel_tol = 1e-10;     // radial quadrature target
    int panels_per_octave = 6;  // log-radial panel density
    int gauss_order = 12;
};

// Arcs (theta intervals in [0, 2pi)) of the circle |w - z| = r lying inside
// the domain.  Exact for disk/square/half-plane; scan + bisection for graphs.
std::vector<std::pair<double, double>> circle_domain_arcs(const Domain& dom, cplx z, double r);

EvalResult t_char_pv(const Domain& dom, MultiIndex g, cplx z, const PvOptions& opts = {});

// Principal value of T^g f at z for smooth f supported in `support`.
EvalResult t_smooth_pv(const std::function<cplx(cplx)>& f, Box support, MultiIndex g, cplx z,
                       double rel_tol = 1e-7);

EvalResult t_char_contour(const Domain& dom, MultiIndex g, cplx z);

// m-th Beurling iterate as a kernel index: B^m = c_m T^{(-m-1, m-1)} with
// c_m = (-1)^m m / pi.
std::pair<MultiIndex, cplx> beurling_iterate_index(int m);

enum class LadderCase { identity, zero, reduce };

struct LadderResult {
    LadderCase kind = LadderCase::reduce;
    // identity: D^a T^g = constant * Id on the domain interior (constant
    // flagged measured, not asserted); reduce: D^a T^g = constant * T^{g-a}.
    double constant = 0.0;
    MultiIndex reduced{};
    bool constant_measured = false;
};

// Case split for weak derivatives D^a of T^g applied to characteristic
// functions, valid in the domain interior; a = (a1, a2) counts d/dz and
// d/dzbar derivatives.
LadderResult derivative_ladder(MultiIndex g, MultiIndex a);

// T^g chi_Omega at z for locally integrable kernels (homogeneity >= -1); no
// principal value is involved.
EvalResult t_f(const Domain& dom, MultiIndex g, cplx z);
// Same transform applied to sampled data by plain cell-sum quadrature (cells
// within ~2h of z are dropped; their contribution cancels to leading order).
EvalResult t_f(MultiIndex g, const GridFunction& f, cplx z);

struct YoungReport {
    double p = 2.0;
    double lhs = 0.0;             // ||T^nu f||_p over the domain
    double f_norm = 0.0;          // ||f||_p over the grid box
    double bound_sharp = 0.0;     // ||kernel||_{L1(B(0,diam))} * ||f||_p
    double bound_displayed = 0.0; // diam^{hom+2} * ||f||_p (no angular factor)
    bool holds_sharp = false;
    bool holds_displayed = false;
};

// Convolution-inequality check for nu in {(-1,0), (0,-1), (0,0)}: the grid
// transform is evaluated by the FFT route and its L^p norm over the domain is
// compared against the L^1(kernel) * L^p(f) bound.  Both the sharp constant
// and the bare diam^{hom+2} coefficient are reported; only the former is a
// theorem.
YoungReport young_bound_check(const Domain& dom, MultiIndex nu, const GridFunction& f,
                              double p);

struct FlatPolyResult {
    cplx value{};
    double ratio = 0.0;       // |value| * rho_int^n / (1 + 16 sqrt(rho_ext))^{j2}
    double tail_bound = 0.0;  // truncation tail of the unbounded integral
    double quad_error = 0.0;
    int j1 = 0;
    int j2 = 0;
    int degree = 0;
    std::vector<double> coeff_slack;  // |a_j| / allowed bound, per coefficient
};

// Probe of the flat-polynomial kernel bound: P describes the graph domain
// {y > P(x)}; the kernel index is (-j1, j2) with j1 = j2 + degree + 2.  The
// coefficient bounds (|a_0| <= 3^n d ri^2/R, |a_1| <= 3^{n-1} d ri/R,
// |a_j| <= 3^{n-j} d/(j! R^{j-1})) are enforced for degree >= 2; degree 1 is
// the exact-vanishing half-plane case.
FlatPolyResult flat_poly_bound_probe(const Poly1D& P, int j2, cplx z, double rho_int,
                                     double rho_ext, double delta, double R);

}  // namespace beurlab
