#include "beurlab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace beurlab {

cplx Window::to_frame(cplx z) const { return std::exp(cplx{0.0, -rotation}) * (z - center); }

cplx Window::from_frame(cplx w) const { return center + std::exp(cplx{0.0, rotation}) * w; }

bool Window::frame_square_contains(cplx z, double dilate) const {
    const cplx w = to_frame(z);
    const double h = dilate * R;
    return std::abs(w.real()) <= h && std::abs(w.imag()) <= h;
}

namespace {

// Separating-axis test for two rotated squares given by center/rotation/half-side.
bool rotated_squares_disjoint(const Window& a, const Window& b, double half) {
    const auto corners = [&](const Window& w) {
        std::array<cplx, 4> cs;
        int k = 0;
        for (double sx : {-1.0, 1.0})
            for (double sy : {-1.0, 1.0})
                cs[k++] = w.from_frame(cplx{sx * half, sy * half});
        return cs;
    };
    const std::array<cplx, 4> ca = corners(a), cb = corners(b);
    const auto separated_along = [&](double angle) {
        const cplx axis = std::exp(cplx{0.0, angle});
        double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
        for (const cplx& p : ca) {
            const double t = p.real() * axis.real() + p.imag() * axis.imag();
            amin = std::min(amin, t);
            amax = std::max(amax, t);
        }
        for (const cplx& p : cb) {
            const double t = p.real() * axis.real() + p.imag() * axis.imag();
            bmin = std::min(bmin, t);
            bmax = std::max(bmax, t);
        }
        return amax < bmin || bmax < amin;
    };
    for (double ang : {a.rotation, a.rotation + M_PI_2, b.rotation, b.rotation + M_PI_2})
        if (separated_along(ang)) return true;
    return false;
}

// Builds the sampled local graph for a chart: walk the boundary in both
// directions from the window center, collecting frame points while the frame
// abscissa stays monotone, then resample on the uniform grid of [-4RA, 4RA].
DefiningFunction chart_from_boundary(const BoundaryPolyline& boundary, double t_center,
                                     const Window& frame_stub, double RA, int n,
                                     DefiningFunction::Interp interp) {
    const double step = std::min(RA / 64.0, boundary.length() / 64.0);
    std::vector<std::pair<double, double>> fr;  // (x, y) in frame coordinates
    fr.reserve(2048);
    const auto push = [&](double t) {
        const cplx w = frame_stub.to_frame(boundary.at_arclength(t));
        fr.emplace_back(w.real(), w.imag());
    };
    const double reach = 6.0 * RA;  // arc-length walking budget per side
    for (double t = t_center - reach; t <= t_center + reach + 0.5 * step; t += step) push(t);
    std::sort(fr.begin(), fr.end());
    // Keep the maximal x-monotone stretch around x = 0.
    std::vector<std::pair<double, double>> mono;
    for (const auto& p : fr) {
        if (!mono.empty() && p.first <= mono.back().first + 1e-14) continue;
        mono.push_back(p);
    }
    if (mono.size() < 8)
        throw std::invalid_argument("window chart: boundary is not a graph in the frame");
    const double lo = mono.front().first, hi = mono.back().first;
    if (lo > -RA || hi < RA)
        throw std::invalid_argument("window chart: graph does not span the window");

    const int m = 513;
    std::vector<double> ys(m);
    for (int i = 0; i < m; ++i) {
        double x = -4.0 * RA + 8.0 * RA * i / (m - 1);
        x = std::clamp(x, lo, hi);
        auto it = std::lower_bound(mono.begin(), mono.end(), std::make_pair(x, -1e300));
        if (it == mono.begin()) ++it;
        if (it == mono.end()) --it;
        const auto& p1 = *(it - 1);
        const auto& p2 = *it;
        const double u = (p2.first > p1.first) ? (x - p1.first) / (p2.first - p1.first) : 0.0;
        ys[i] = p1.second + u * (p2.second - p1.second);
    }
    // Pin the center sample so A(0) = 0 holds exactly.
    ys[(m - 1) / 2] = 0.0;

    // Measure the chart's Lipschitz data from the interpolant itself (the
    // spline can overshoot the raw sample slopes near clamped stretches).
    const DefiningFunction probe = DefiningFunction::sampled(ys, n, 1.0, RA, interp);
    const int deriv_cap = std::min(n, interp == DefiningFunction::Interp::linear ? 1 : 2);
    double delta = 0.0;
    const int dense = 4 * 4096;
    for (int j = 1; j <= deriv_cap; ++j) {
        double dj = 0.0;
        for (int k = 0; k < dense; ++k) {
            const double x = -4.0 * RA + (k + 0.5) * 8.0 * RA / dense;
            dj = std::max(dj, std::abs(probe.derivative(x, j)));
        }
        delta = std::max(delta, dj * std::pow(RA, j - 1));
    }
    delta = delta * 1.05 + 1e-12;
    DefiningFunction A = DefiningFunction::sampled(std::move(ys), n, delta, RA, interp);
    return A;
}

void verify_decomposition(const Domain& domain, WindowDecomposition& dec,
                          const BoundaryPolyline& boundary) {
    // (1/20)-dilates cover the boundary.
    dec.covering_verified = true;
    const int probes = 4096;
    for (int i = 0; i < probes; ++i) {
        const double t = boundary.length() * i / probes;
        const cplx z = boundary.at_arclength(t);
        bool covered = false;
        for (const Window& w : dec.windows) {
            if (w.frame_square_contains(z, 1.0 / 20.0)) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            dec.covering_verified = false;
            break;
        }
    }
    // (1/40)-dilates pairwise disjoint.
    dec.disjointness_verified = true;
    const double half = dec.R / 40.0;
    for (std::size_t i = 0; i < dec.windows.size() && dec.disjointness_verified; ++i) {
        for (std::size_t j = i + 1; j < dec.windows.size(); ++j) {
            const double sep = std::abs(dec.windows[i].center - dec.windows[j].center);
            if (sep > 4.0 * half) continue;  // circumradius bound, cannot overlap
            if (!rotated_squares_disjoint(dec.windows[i], dec.windows[j], half)) {
                dec.disjointness_verified = false;
                break;
            }
        }
    }
    // Each chart describes the domain inside its window square.
    for (const Window& w : dec.windows) {
        const int grid = 24;
        for (int iy = 0; iy < grid; ++iy) {
            for (int ix = 0; ix < grid; ++ix) {
                const double x = -w.R + 2.0 * w.R * (ix + 0.5) / grid;
                const double y = -w.R + 2.0 * w.R * (iy + 0.5) / grid;
                const double margin = 4.0 * w.R / grid;
                if (std::abs(y - w.A(x)) < margin) continue;  // skip near-boundary band
                const bool graph_side = y > w.A(x);
                const bool domain_side = domain.contains(w.from_frame({x, y}));
                if (graph_side != domain_side)
                    throw std::invalid_argument(
                        "window decomposition: chart disagrees with the domain at " +
                        domain.describe());
            }
        }
    }
}

}  // namespace

WindowDecomposition window_decomposition(const Domain& domain, double R) {
    if (R <= 0.0) throw std::invalid_argument("window_decomposition: R must be > 0");
    WindowDecomposition dec;
    dec.R = R;

    if (const auto* g = std::get_if<GraphDomain>(&domain.variant())) {
        Window w;
        w.center = {0.0, 0.0};
        w.rotation = 0.0;
        w.R = R;
        w.A = g->A;
        dec.windows.push_back(std::move(w));
        dec.covering_verified = true;      // single-chart convention
        dec.disjointness_verified = true;
        return dec;
    }
    if (const auto* h = std::get_if<HalfPlaneDomain>(&domain.variant())) {
        Window w;
        w.center = {0.0, 0.0};
        w.rotation = h->normal_angle - M_PI_2;
        w.R = R;
        w.A = DefiningFunction::polynomial({0.0}, 1, 0.0, R);
        dec.windows.push_back(std::move(w));
        dec.covering_verified = true;
        dec.disjointness_verified = true;
        return dec;
    }
    if (const auto* p = std::get_if<PolyGraphDomain>(&domain.variant())) {
        Window w;
        w.center = {0.0, 0.0};
        w.rotation = 0.0;
        w.R = R;
        std::vector<double> cs = p->coeffs;
        double delta = 0.0;
        std::vector<double> d1 = cs;
        if (!d1.empty()) {
            std::vector<double> der;
            for (std::size_t i = 1; i < cs.size(); ++i) der.push_back(cs[i] * double(i));
            for (int k = 0; k <= 512; ++k) {
                const double x = -4.0 * R + 8.0 * R * k / 512.0;
                double v = 0.0;
                for (std::size_t i = der.size(); i-- > 0;) v = v * x + der[i];
                delta = std::max(delta, std::abs(v));
            }
        }
        const int n = cs.size() > 1 ? static_cast<int>(cs.size()) - 1 : 1;
        w.A = DefiningFunction::polynomial(std::move(cs), n, delta * 1.1 + 1e-12, R);
        dec.windows.push_back(std::move(w));
        dec.covering_verified = true;
        dec.disjointness_verified = true;
        return dec;
    }

    const Box box = domain.bounding_box(1.0);
    const BoundaryPolyline boundary = domain.boundary_polyline(1 << 14, box);
    const double L = boundary.length();
    const double target_spacing = 0.085 * R;
    const int M = std::max<int>(4, static_cast<int>(std::ceil(L / target_spacing)));
    const double spacing = L / M;

    const bool is_square = std::holds_alternative<SquareDomain>(domain.variant());
    std::vector<cplx> corners;
    if (is_square) {
        const auto& s = std::get<SquareDomain>(domain.variant());
        const double h = s.half_side;
        if (R > h) throw std::invalid_argument("window_decomposition: R too large for square");
        for (double sx : {-1.0, 1.0})
            for (double sy : {-1.0, 1.0}) corners.push_back(s.center + cplx{sx * h, sy * h});
    }

    for (int k = 0; k < M; ++k) {
        const double t = spacing * (k + 0.5);
        Window w;
        w.center = boundary.at_arclength(t);
        w.R = R;
        bool corner_chart = false;
        if (is_square) {
            for (const cplx& c : corners) {
                if (std::abs(w.center - c) <= R * std::sqrt(2.0) * 1.05) {
                    // 45-degree chart: frame "up" along the inward corner bisector,
                    // so the domain sits above the local graph.
                    const auto& s = std::get<SquareDomain>(domain.variant());
                    const cplx bis = (s.center - c) / std::abs(c - s.center);
                    w.rotation = std::arg(bis) - M_PI_2;
                    const cplx wc = w.to_frame(c);
                    // Boundary in this frame: y = |x - xc| - |xc|.
                    const int m = 513;
                    std::vector<double> ys(m);
                    for (int i = 0; i < m; ++i) {
                        const double x = -4.0 * R + 8.0 * R * i / (m - 1);
                        ys[i] = std::abs(x - wc.real()) - std::abs(wc.real());
                    }
                    w.A = DefiningFunction::sampled(std::move(ys), 1, 1.0, R,
                                                    DefiningFunction::Interp::linear);
                    corner_chart = true;
                    break;
                }
            }
        }
        if (!corner_chart) {
            const cplx tan = boundary.tangent_at_arclength(t);
            w.rotation = std::arg(tan);
            Window stub = w;
            w.A = chart_from_boundary(boundary, t, stub, R, 2,
                                      DefiningFunction::Interp::spline);
        }
        w.A.certify(1e-6);
        dec.windows.push_back(std::move(w));
    }

    verify_decomposition(domain, dec, boundary);
    if (!dec.covering_verified || !dec.disjointness_verified)
        throw std::invalid_argument(
            "window_decomposition: covering/disjointness verification failed");
    return dec;
}

}  // namespace beurlab
