#pragma once

// Planar domain machinery: Lipschitz-graph defining functions, the domain
// variants used throughout the experiments, dyadic cubes/intervals, Whitney
// coverings, boundary window decompositions, and indicator-area quadrature.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace beurlab {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Intervals
// ---------------------------------------------------------------------------

struct Interval {
    double a = 0.0, b = 0.0;
    double length() const { return b - a; }
    double mid() const { return 0.5 * (a + b); }
    bool contains(double x) const { return x >= a && x <= b; }
    // concentric dilate: c*I keeps the midpoint, scales the length
    Interval dilate(double c) const {
        const double m = mid(), h = 0.5 * c * length();
        return {m - h, m + h};
    }
};

// Dyadic interval [k 2^-level, (k+1) 2^-level]; negative levels are allowed.
struct DyadicInterval {
    int level = 0;
    std::int64_t k = 0;
    double side() const;
    Interval interval() const;
    DyadicInterval parent() const;
    bool operator==(const DyadicInterval&) const = default;
};

// ---------------------------------------------------------------------------
// Defining functions (local boundary graphs)
// ---------------------------------------------------------------------------

// A C^{n-1,1} graph function A with A(0) = 0 (and A'(0) = 0 when n >= 2),
// |A^{(j)}| <= delta / R^{j-1} for 1 <= j <= n, evaluated inside [-4R, 4R]
// and extended by zero outside.  Backed by either polynomial coefficients or
// uniform samples (cubic-spline or piecewise-linear reconstruction).
class DefiningFunction {
public:
    enum class Interp { spline, linear };

    static DefiningFunction polynomial(std::vector<double> coeffs, int n,
                                       double delta, double R);
    static DefiningFunction sampled(std::vector<double> values, int n,
                                    double delta, double R,
                                    Interp interp = Interp::spline);

    double operator()(double x) const;
    double derivative(double x, int order = 1) const;

    int smoothness() const { return n_; }
    double delta() const { return delta_; }
    double R() const { return R_; }

    // Dense-sampling certification of the graph-class invariants; throws
    // std::invalid_argument with a description on failure.
    void certify(double tol = 1e-9, int samples = 4096) const;

private:
    DefiningFunction() = default;
    double eval_raw(double x) const;
    double deriv_raw(double x, int order) const;

    std::vector<double> coeffs_;       // polynomial representation
    std::vector<double> samples_;      // sampled representation on [-4R, 4R]
    std::vector<double> spline_m_;     // natural cubic spline second derivatives
    Interp interp_ = Interp::spline;
    bool poly_ = true;
    int n_ = 1;
    double delta_ = 0.0;
    double R_ = 1.0;
};

// ---------------------------------------------------------------------------
// Domains
// ---------------------------------------------------------------------------

struct Box {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    double diag() const;
    bool contains(cplx z) const {
        return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
    }
    bool finite() const;
};

struct GraphDomain { DefiningFunction A; };                   // { y > A(x) }
struct DiskDomain { cplx center; double radius = 1.0; };
struct SquareDomain { cplx center; double half_side = 1.0; };
struct HalfPlaneDomain { double normal_angle = M_PI_2; };     // inward normal e^{ia}
struct PolyGraphDomain { std::vector<double> coeffs; };       // { y > P(x) }, P global

// Positively oriented dense boundary polyline; the uniform tool for
// cube-to-boundary distances and arc-length parameterization.
class BoundaryPolyline {
public:
    BoundaryPolyline(std::vector<cplx> pts, bool closed);

    double dist_point(cplx z) const;
    double dist_box(const Box& b) const;   // exact segment/rectangle distance
    double length() const { return cum_.back(); }
    bool closed() const { return closed_; }
    double spacing() const { return spacing_; }
    std::size_t size() const { return pts_.size(); }
    const std::vector<cplx>& points() const { return pts_; }

    cplx at_arclength(double t) const;       // wraps when closed
    cplx tangent_at_arclength(double t) const;

private:
    void build_index();
    std::vector<cplx> pts_;
    std::vector<double> cum_;
    bool closed_ = false;
    double spacing_ = 0.0;
    // uniform bucket grid over the points, for fast nearest queries
    double bx0_ = 0, by0_ = 0, bh_ = 1;
    int bnx_ = 1, bny_ = 1;
    std::vector<std::vector<std::uint32_t>> buckets_;
};

class Domain {
public:
    using Variant = std::variant<GraphDomain, DiskDomain, SquareDomain,
                                 HalfPlaneDomain, PolyGraphDomain>;

    explicit Domain(Variant v) : v_(std::move(v)) {}
    static Domain graph(DefiningFunction A) { return Domain(GraphDomain{std::move(A)}); }
    static Domain disk(cplx c, double r) { return Domain(DiskDomain{c, r}); }
    static Domain square(cplx c, double half_side) { return Domain(SquareDomain{c, half_side}); }
    static Domain half_plane(double normal_angle = M_PI_2) {
        return Domain(HalfPlaneDomain{normal_angle});
    }
    static Domain poly_graph(std::vector<double> coeffs) {
        return Domain(PolyGraphDomain{std::move(coeffs)});
    }

    const Variant& variant() const { return v_; }
    bool contains(cplx z) const;          // open-side test; boundary excluded
    bool bounded() const;
    double diameter() const;              // throws for unbounded domains
    Box bounding_box(double margin) const;

    // Signed-free boundary height for graph-type domains: y - A(x) etc.
    // Dense positively oriented polyline covering the part of the boundary
    // relevant to `box` (the whole boundary for bounded domains).
    BoundaryPolyline boundary_polyline(int samples, const Box& box) const;

    std::string describe() const;

private:
    Variant v_;
};

// ---------------------------------------------------------------------------
// Dyadic cubes
// ---------------------------------------------------------------------------

struct DyadicCube {
    int level = 0;              // side = 2^-level
    std::int64_t ix = 0, iy = 0;
    double side() const;
    cplx center() const;
    Box box() const;
    DyadicCube parent() const;
    DyadicCube child(int cx, int cy) const;  // cx, cy in {0, 1}
    bool operator==(const DyadicCube&) const = default;
};

// Vertical projection pi(Q) of a dyadic cube onto the real axis.
DyadicInterval vertical_projection(const DyadicCube& q);

// Do two closed cubes share at least a boundary point?
bool cubes_touch(const DyadicCube& a, const DyadicCube& b);

// ---------------------------------------------------------------------------
// Whitney coverings
// ---------------------------------------------------------------------------

struct WhitneyCube {
    DyadicCube cube;
    double dist = 0.0;          // dist(Q, boundary) at build time
};

struct WhitneyCovering {
    std::vector<WhitneyCube> cubes;
    double cw = 1.0;
    double min_scale = 0.0;
    Box box;
    double covered_area = 0.0;          // sum of cube areas intersected with box
    double domain_area = 0.0;           // quadrature estimate of |domain ∩ box|
    double truncated_collar_area = 0.0; // domain_area - covered_area
};

struct WhitneyCheckReport {
    std::size_t cube_count = 0;
    std::size_t distance_failures = 0;  // cubes violating cw*l <= d <= 4*cw*l
    double min_ratio = 0.0, max_ratio = 0.0;   // dist / (cw * side)
    std::size_t neighbor_pairs = 0;
    std::size_t neighbor_failures = 0;  // touching pairs with side ratio > 2
    int max_overlap_20q = 0;            // superposition count of the 20Q dilates
    double coverage_fraction = 0.0;     // covered_area / domain_area
    bool disjoint = true;
    bool pass(int overlap_bound = 500) const {
        return distance_failures == 0 && neighbor_failures == 0 && disjoint &&
               max_overlap_20q <= overlap_bound;
    }
};

// Builds a Whitney covering of (domain ∩ box): disjoint dyadic cubes with
// cw*l(Q) <= dist(Q, boundary) <= 4*cw*l(Q), truncated below min_scale (the
// un-covered collar is reported, not silently dropped).  The maximal-cube
// selection guarantees touching cubes differ by at most one level only when
// cw > sqrt(2).
WhitneyCovering build_whitney(const Domain& domain, double cw, double min_scale,
                              const Box& box, int boundary_samples = 1 << 14);

WhitneyCheckReport check_whitney(const Domain& domain, const WhitneyCovering& cov,
                                 int boundary_samples = 1 << 14);

// ---------------------------------------------------------------------------
// Window decompositions
// ---------------------------------------------------------------------------

// Boundary chart: in the frame w = exp(-i rotation) (z - center) the domain
// intersected with the square Q(0, R) is { (x, y) : y > A(x) }.
struct Window {
    cplx center;
    double rotation = 0.0;
    double R = 1.0;
    DefiningFunction A = DefiningFunction::polynomial({0.0}, 1, 0.0, 1.0);

    cplx to_frame(cplx z) const;
    cplx from_frame(cplx w) const;
    bool frame_square_contains(cplx z, double dilate) const;
};

struct WindowDecomposition {
    std::vector<Window> windows;
    double R = 1.0;
    bool covering_verified = false;     // (1/20)-dilates cover the boundary
    bool disjointness_verified = false; // (1/40)-dilates pairwise disjoint
};

// Throws std::invalid_argument when no delta-certifiable chart family exists
// at this R (e.g. square windows with R too large for the 45-degree charts).
WindowDecomposition window_decomposition(const Domain& domain, double R);

// ---------------------------------------------------------------------------
// Indicator-difference areas
// ---------------------------------------------------------------------------

struct AreaResult {
    double area = 0.0;
    double error_estimate = 0.0;   // |value - half-resolution value|
};

// Midpoint-rule area of the symmetric difference of two domains inside
// `region`, with a half-resolution Richardson error estimate.
AreaResult symmetric_difference_area(const Domain& d1, const Domain& d2,
                                     const Box& region, double resolution);

}  // namespace beurlab
