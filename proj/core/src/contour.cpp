#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beurlab/operators.hpp"
#include "beurlab/quadrature.hpp"

namespace beurlab {

namespace {

constexpr double TWO_PI = 2.0 * M_PI;

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
    return v;
}

double poly_eval_local(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

double poly_deriv_local(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) v = v * x + c[i] * static_cast<double>(i);
    return v;
}

double seg_point_dist(cplx z, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    double t = ((z.real() - a.real()) * d.real() + (z.imag() - a.imag()) * d.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

// Exact integral of (z-w)^{g1} conj(z-w)^{q} dw along the segment a -> b.
// On the segment conj(u) = A + B u with u = z - w, so the integrand expands
// binomially into pure powers of u.  All factors are rescaled by s = max|u|
// (the sum is homogeneous of degree g1 + q + 1) to keep intermediates in
// double range for very long truncation segments.
cplx segment_piece(cplx z, int g1, int q, cplx a, cplx b) {
    const cplx d = b - a;
    if (std::abs(d) == 0.0) return {0.0, 0.0};
    const cplx u0 = z - a, u1 = z - b;
    const double s = std::max(std::abs(u0), std::abs(u1));
    if (s == 0.0) throw std::invalid_argument("segment_piece: z at a segment endpoint");
    const cplx B = std::conj(d) / d;
    const cplx u0s = u0 / s, u1s = u1 / s;
    const cplx As = std::conj(u0s) - B * u0s;
    cplx acc{0.0, 0.0};
    for (int j = 0; j <= q; ++j) {
        const int k = g1 + j;
        cplx P;
        if (k == -1) {
            P = std::log(u1s / u0s);  // straight segment: never winds around 0
        } else {
            P = (ipow(u1s, k + 1) - ipow(u0s, k + 1)) / static_cast<double>(k + 1);
        }
        acc += binom(q, j) * ipow(As, q - j) * ipow(B, j) * P;
    }
    return -std::pow(s, g1 + q + 1) * acc;
}

cplx polygon_sum(cplx z, int g1, int q, const std::vector<cplx>& verts) {
    cplx acc{0.0, 0.0};
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i) acc += segment_piece(z, g1, q, verts[i], verts[(i + 1) % n]);
    return acc;
}

void require_off_segments(cplx z, const std::vector<cplx>& verts, double scale, bool closed) {
    const std::size_t n = verts.size();
    const std::size_t last = closed ? n : n - 1;
    for (std::size_t i = 0; i < last; ++i) {
        if (seg_point_dist(z, verts[i], verts[(i + 1) % n]) < 1e-13 * scale)
            throw std::invalid_argument("t_char_contour: z is numerically on the contour");
    }
}

// adaptive contour integral of F along a smooth parametrized piece, with a
// two-tolerance pass that yields an error estimate
template <typename G>
std::pair<cplx, double> adaptive_piece(G&& integrand, double a, double b) {
    double mag = 0.0;
    for (int i = 0; i <= 32; ++i) mag = std::max(mag, std::abs(integrand(a + (b - a) * i / 32.0)));
    const double floor_abs = std::max(1e-300, mag * std::abs(b - a) * 1e-14);
    const cplx fine = integrate_adaptive(integrand, a, b, 1e-12, floor_abs, 46, 12);
    const cplx coarse = integrate_adaptive(integrand, a, b, 1e-9, floor_abs * 10.0, 40, 12);
    return {fine, std::abs(fine - coarse)};
}

struct ContourOut {
    cplx sum{};       // raw contour sum of (z-w)^{g1} conj(z-w)^{g2+1} dw
    double err = 0.0;  // quadrature + truncation-tail estimate
    EvalMethod method = EvalMethod::contour;
};

ContourOut contour_sum(const Domain& dom, MultiIndex g, cplx z) {
    const int g1 = g.g1, q = g.g2 + 1;
    const int hom = g.homogeneity();
    ContourOut out;

    if (const auto* dk = std::get_if<DiskDomain>(&dom.variant())) {
        const double R = dk->radius;
        const double gap = std::abs(std::abs(z - dk->center) - R);
        if (g1 < 0 && gap < 1e-10 * R)
            throw std::invalid_argument("t_char_contour: z is numerically on the circle");
        auto integrand = [&](double th) {
            const cplx w = dk->center + R * std::exp(cplx{0.0, th});
            const cplx u = z - w;
            return ipow(u, g1) * ipow(std::conj(u), q) * cplx{0.0, R} * std::exp(cplx{0.0, th});
        };
        auto [v, e] = adaptive_piece(integrand, 0.0, TWO_PI);
        out.sum = v;
        out.err = e;
        out.method = EvalMethod::contour;
        return out;
    }

    if (const auto* sq = std::get_if<SquareDomain>(&dom.variant())) {
        const double h = sq->half_side;
        const cplx c = sq->center;
        const std::vector<cplx> verts{c + h * cplx{-1, -1}, c + h * cplx{1, -1},
                                      c + h * cplx{1, 1}, c + h * cplx{-1, 1}};
        if (g1 < 0) require_off_segments(z, verts, h, true);
        out.sum = polygon_sum(z, g1, q, verts);
        out.err = 1e-14 * std::abs(out.sum);
        out.method = EvalMethod::closed_form;
        return out;
    }

    if (hom >= -2)
        throw std::invalid_argument(
            "t_char_contour: unbounded domain requires homogeneity <= -3");

    if (const auto* hp = std::get_if<HalfPlaneDomain>(&dom.variant())) {
        const cplx rot = std::exp(cplx{0.0, hp->normal_angle - M_PI / 2.0});
        const cplx zf = z / rot;
        const double S = 1e8 * std::max(1.0, std::abs(z));
        const std::vector<cplx> verts{rot * cplx{-S, 0.0}, rot * cplx{S, 0.0},
                                      rot * cplx{S, S}, rot * cplx{-S, S}};
        if (g1 < 0) require_off_segments(z, verts, std::max(1.0, std::abs(z)), true);
        out.sum = polygon_sum(z, g1, q, verts);
        const double rho0 = std::min(S - std::abs(zf.real()), S - zf.imag());
        if (rho0 <= 0.0) throw std::invalid_argument("t_char_contour: z outside truncation");
        out.err = 1e-14 * std::abs(out.sum) + TWO_PI * std::pow(rho0, hom + 2) / std::abs(hom + 2.0);
        out.method = EvalMethod::closed_form;
        return out;
    }

    if (const auto* gd = std::get_if<GraphDomain>(&dom.variant())) {
        const double R4 = 4.0 * gd->A.R();
        const double K = std::pow(1e8, 1.0 / std::abs(hom + 2.0));
        const double X = std::min(1e9, std::max({2.0 * R4, 2.0 * std::abs(z), 1.0}) * K);
        const double Y = X;
        auto F = [&](cplx w) {
            const cplx u = z - w;
            return ipow(u, g1) * ipow(std::conj(u), q);
        };
        // ccw: flat left, jump, curve, jump, flat right, then the closing box
        const double aL = gd->A(-R4 + 1e-12), aR = gd->A(R4 - 1e-12);
        cplx acc{0.0, 0.0};
        double err = 0.0;
        acc += segment_piece(z, g1, q, {-X, 0.0}, {-R4, 0.0});
        acc += segment_piece(z, g1, q, {-R4, 0.0}, {-R4, aL});
        auto integrand = [&](double x) {
            return F(cplx{x, gd->A(x)}) * cplx{1.0, gd->A.derivative(x, 1)};
        };
        {
            auto [v, e] = adaptive_piece(integrand, -R4 + 1e-12, R4 - 1e-12);
            acc += v;
            err += e;
        }
        acc += segment_piece(z, g1, q, {R4, aR}, {R4, 0.0});
        acc += segment_piece(z, g1, q, {R4, 0.0}, {X, 0.0});
        acc += segment_piece(z, g1, q, {X, 0.0}, {X, Y});
        acc += segment_piece(z, g1, q, {X, Y}, {-X, Y});
        acc += segment_piece(z, g1, q, {-X, Y}, {-X, 0.0});
        const double rho0 = std::min(X - std::abs(z.real()), Y - z.imag());
        if (rho0 <= 0.0) throw std::invalid_argument("t_char_contour: z outside truncation");
        out.sum = acc;
        out.err = err + TWO_PI * std::pow(rho0, hom + 2) / std::abs(hom + 2.0);
        out.method = EvalMethod::contour;
        return out;
    }

    const auto& pg = std::get<PolyGraphDomain>(dom.variant());
    const double K = std::pow(1e8, 1.0 / std::abs(hom + 2.0));
    const double X = std::min(1e9, std::max(1.0, 2.0 * std::abs(z)) * K);
    double ymax = 0.0;
    for (int i = 0; i <= 4096; ++i)
        ymax = std::max(ymax, poly_eval_local(pg.coeffs, -X + 2.0 * X * i / 4096.0));
    const double Y = ymax + X;
    auto F = [&](cplx w) {
        const cplx u = z - w;
        return ipow(u, g1) * ipow(std::conj(u), q);
    };
    cplx acc{0.0, 0.0};
    double err = 0.0;
    const double pL = poly_eval_local(pg.coeffs, -X), pR = poly_eval_local(pg.coeffs, X);
    if (pg.coeffs.size() <= 2) {  // straight-line boundary: exact segment
        acc += segment_piece(z, g1, q, {-X, pL}, {X, pR});
    } else {
        auto integrand = [&](double x) {
            return F(cplx{x, poly_eval_local(pg.coeffs, x)}) *
                   cplx{1.0, poly_deriv_local(pg.coeffs, x)};
        };
        auto [v, e] = adaptive_piece(integrand, -X, X);
        acc += v;
        err += e;
    }
    acc += segment_piece(z, g1, q, {X, pR}, {X, Y});
    acc += segment_piece(z, g1, q, {X, Y}, {-X, Y});
    acc += segment_piece(z, g1, q, {-X, Y}, {-X, pL});
    const double rho0 = X - std::abs(z.real());
    if (rho0 <= 0.0) throw std::invalid_argument("t_char_contour: z outside truncation");
    out.sum = acc;
    out.err = err + TWO_PI * std::pow(rho0, hom + 2) / std::abs(hom + 2.0);
    out.method = EvalMethod::contour;
    return out;
}

}  // namespace

EvalResult t_char_contour(const Domain& dom, MultiIndex g, cplx z) {
    if (g.g2 <= -1) {
        if (g.g1 < 0)
            throw std::invalid_argument(
                "t_char_contour: kernel index outside the contour-admissible family");
        // conjugate symmetry: swapping the index pair conjugates the kernel
        EvalResult mirror = t_char_contour(dom, g.mirrored(), z);
        mirror.value = std::conj(mirror.value);
        return mirror;
    }
    const int q = g.g2 + 1;
    ContourOut raw = contour_sum(dom, g, z);
    EvalResult res;
    res.value = cplx{0.0, 1.0} / (2.0 * q) * raw.sum;
    res.error = raw.err / (2.0 * q);
    res.method = raw.method;
    if (!std::isfinite(res.value.real()) || !std::isfinite(res.value.imag()))
        throw std::runtime_error("t_char_contour: non-finite result");
    return res;
}

}  // namespace beurlab
