#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beurlab/norms.hpp"
#include "beurlab/quadrature.hpp"

namespace beurlab {

NormalField normal_field(const Window& window, const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("normal_field: need at least two samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("normal_field: samples must be strictly increasing");

    NormalField out;
    out.x = xs;
    out.normal.reserve(xs.size());
    out.tau.resize(xs.size());

    auto speed = [&](double x) {
        const double d = window.A.derivative(x, 1);
        return std::sqrt(1.0 + d * d);
    };
    for (double x : xs) {
        const double d = window.A.derivative(x, 1);
        if (!std::isfinite(d))
            throw std::runtime_error("normal_field: non-finite derivative sample");
        const double s = std::sqrt(1.0 + d * d);
        out.normal.push_back(cplx{d, -1.0} / s);
    }
    // tau(x) = int_0^x speed, accumulated between consecutive samples
    std::vector<double> inc(xs.size(), 0.0);
    for (std::size_t i = 1; i < xs.size(); ++i)
        inc[i] = integrate_gl(speed, xs[i - 1], xs[i], 8);
    out.tau[0] = integrate_gl(speed, 0.0, xs[0], 16);
    for (std::size_t i = 1; i < xs.size(); ++i) out.tau[i] = out.tau[i - 1] + inc[i];
    return out;
}

namespace {

GridFunction axis_diff(const GridFunction& g, int axis) {
    const int n = g.size();
    const double h = g.spacing();
    GridFunction out(g.box(), n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (axis == 0) {
                const int im = std::max(i - 1, 0), ip = std::min(i + 1, n - 1);
                out.at(i, j) = (g.at(ip, j) - g.at(im, j)) / ((ip - im) * h);
            } else {
                const int jm = std::max(j - 1, 0), jp = std::min(j + 1, n - 1);
                out.at(i, j) = (g.at(i, jp) - g.at(i, jm)) / ((jp - jm) * h);
            }
        }
    }
    return out;
}

}  // namespace

SobolevReport sobolev_norm(const GridFunction& f, const Domain& dom, int n, double p,
                           double collar) {
    if (n < 1) throw std::invalid_argument("sobolev_norm: derivative order must be >= 1");
    if (!(p >= 1.0)) throw std::invalid_argument("sobolev_norm: p must be >= 1");
    const double h = f.spacing();
    if (!(h < collar / 4.0))
        throw std::invalid_argument("sobolev_norm: collar too small for the grid spacing");

    const GridMask inside = GridMask::from_predicate(
        f.box(), f.size(), [&](cplx z) { return dom.contains(z); });
    const GridMask core = strip_collar(inside, collar);

    // all mixed centered differences D^(a, n-a)
    std::vector<GridFunction> derivs;
    derivs.reserve(static_cast<std::size_t>(n) + 1);
    for (int a = 0; a <= n; ++a) {
        GridFunction g = f;
        for (int k = 0; k < a; ++k) g = axis_diff(g, 0);
        for (int k = 0; k < n - a; ++k) g = axis_diff(g, 1);
        derivs.push_back(std::move(g));
    }
    GridFunction gradmag(f.box(), f.size());
    const int m = f.size();
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (const GridFunction& d : derivs) s += std::abs(d.at(i, j));
            gradmag.at(i, j) = {s, 0.0};
        }
    }

    SobolevReport rep;
    rep.collar = collar;
    rep.order = n;
    rep.p = p;
    rep.lp = lp_norm(f, inside, p);
    rep.grad = lp_norm(gradmag, core, p);
    rep.total = rep.lp + rep.grad;
    rep.cells_lp = inside.count();
    rep.cells_grad = core.count();
    rep.cells_excluded = inside.count() - core.count();
    return rep;
}

namespace {

// Arc-length parameterized outward normal along the boundary, with the base
// window I carrying the L^p part.  period > 0 marks closed boundaries.
struct ArcNormal {
    std::function<cplx(double)> N;
    Interval I{};
    double period = 0.0;
};

ArcNormal make_graph_arc(const std::function<double(double)>& deriv, double R) {
    const int m = 16384;
    auto xs = std::make_shared<std::vector<double>>();
    auto ts = std::make_shared<std::vector<double>>();
    xs->resize(m + 1);
    ts->resize(m + 1);
    auto speed = [&](double x) {
        const double d = deriv(x);
        return std::sqrt(1.0 + d * d);
    };
    for (int i = 0; i <= m; ++i) (*xs)[i] = -3.0 * R + 6.0 * R * i / m;
    (*ts)[0] = 0.0;
    for (int i = 1; i <= m; ++i)
        (*ts)[i] = (*ts)[i - 1] + integrate_gl(speed, (*xs)[i - 1], (*xs)[i], 4);
    const double t0 = (*ts)[m / 2];  // anchor tau(0) = 0
    for (double& t : *ts) t -= t0;

    auto x_of = [xs, ts](double t) {
        const auto it = std::upper_bound(ts->begin(), ts->end(), t);
        if (it == ts->begin()) return xs->front();
        if (it == ts->end()) return xs->back();
        const std::size_t i = static_cast<std::size_t>(it - ts->begin());
        const double w = (t - (*ts)[i - 1]) / ((*ts)[i] - (*ts)[i - 1]);
        return (*xs)[i - 1] + w * ((*xs)[i] - (*xs)[i - 1]);
    };

    ArcNormal arc;
    arc.N = [x_of, deriv](double t) {
        const double d = deriv(x_of(t));
        return cplx{d, -1.0} / std::sqrt(1.0 + d * d);
    };
    // arc-length of the R-window around x = 0
    const double tR_hi = integrate_adaptive(speed, 0.0, R, 1e-12, 1e-300, 30, 8);
    const double tR_lo = integrate_adaptive(speed, 0.0, -R, 1e-12, 1e-300, 30, 8);
    arc.I = Interval{tR_lo, tR_hi};
    return arc;
}

ArcNormal make_arc_normal(const Domain& dom) {
    if (const auto* dk = std::get_if<DiskDomain>(&dom.variant())) {
        const double R = dk->radius;
        ArcNormal arc;
        arc.N = [R](double t) { return std::exp(cplx{0.0, t / R}); };
        arc.period = 2.0 * M_PI * R;
        arc.I = Interval{0.0, arc.period};
        return arc;
    }
    if (const auto* sq = std::get_if<SquareDomain>(&dom.variant())) {
        const double side = 2.0 * sq->half_side;
        ArcNormal arc;
        arc.period = 4.0 * side;
        arc.I = Interval{0.0, arc.period};
        arc.N = [side, per = arc.period](double t) {
            t = std::fmod(std::fmod(t, per) + per, per);
            const int k = std::min(3, static_cast<int>(t / side));
            static const cplx dirs[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
            return dirs[k];
        };
        return arc;
    }
    if (std::holds_alternative<HalfPlaneDomain>(dom.variant())) {
        ArcNormal arc;
        arc.N = [](double) { return cplx{0.0, -1.0}; };
        arc.I = Interval{-1.0, 1.0};
        return arc;
    }
    if (const auto* gd = std::get_if<GraphDomain>(&dom.variant())) {
        const DefiningFunction& A = gd->A;
        return make_graph_arc([&A](double x) { return A.derivative(x, 1); }, A.R());
    }
    const auto& pg = std::get<PolyGraphDomain>(dom.variant());
    auto coeffs = pg.coeffs;
    auto deriv = [coeffs](double x) {
        double v = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 1;) v = v * x + coeffs[i] * static_cast<double>(i);
        return v;
    };
    return make_graph_arc(deriv, 1.0);
}

}  // namespace

double besov_norm_normal(const Domain& dom, double s, double p, int depth) {
    if (!(p > 1.0)) throw std::invalid_argument("besov_norm_normal: p must be > 1");
    const int n = static_cast<int>(std::lround(s + 1.0 / p));
    if (n < 1 || std::abs(n - 1.0 / p - s) > 1e-9)
        throw std::invalid_argument("besov_norm_normal: s must equal n - 1/p, n >= 1");
    const int dord = n - 1;

    const ArcNormal arc = make_arc_normal(dom);

    auto lp_integrand = [&](double t) { return std::pow(std::abs(arc.N(t)), p); };
    const double lp_part =
        std::pow(integrate_gl(lp_integrand, arc.I.a, arc.I.b, 64), 1.0 / p);

    const double span = arc.period > 0.0 ? arc.period : arc.I.length();
    const double h_fd = span * 1e-4;
    CplxFn f;
    if (dord == 0) {
        f = arc.N;
    } else {
        f = [&arc, h_fd, dord](double t) {
            return finite_difference(arc.N, t - 0.5 * dord * h_fd, h_fd, dord) /
                   std::pow(h_fd, dord);
        };
    }
    const Interval window =
        arc.period > 0.0 ? Interval{0.0, arc.period} : arc.I.dilate(2.0);
    const BesovDiffResult homog =
        besov_differences(f, s - dord, p, p, 1, window, depth);
    return lp_part + homog.value;
}

NormBetaReport lemma_norm_beta_check(const Domain& dom, int n, double p, double R,
                                     int depth) {
    if (n < 1) throw std::invalid_argument("lemma_norm_beta_check: n must be >= 1");
    if (!(p > 1.0)) throw std::invalid_argument("lemma_norm_beta_check: p must be > 1");
    if (!(R > 0.0)) throw std::invalid_argument("lemma_norm_beta_check: R must be positive");

    const WindowDecomposition wd = window_decomposition(dom, R);
    const double s_chart = n + 1.0 - 1.0 / p;

    NormBetaReport rep;
    rep.windows = wd.windows.size();
    for (const Window& w : wd.windows) {
        RealFn A = [&w](double x) { return w.A(x); };
        const BesovBetaResult bet =
            besov_betas(A, s_chart, p, n, Interval{-R / 6.0, R / 6.0}, depth);
        rep.lhs += std::pow(bet.value, p);
        const BesovDiffResult dif = besov_differences(
            A, s_chart, p, p, n + 1, Interval{-R / 3.0, R / 3.0}, std::max(4, depth - 2));
        rep.mid += std::pow(dif.value, p);
    }
    rep.rhs = std::pow(besov_norm_normal(dom, n - 1.0 / p, p, depth), p);
    rep.ratio_lhs_mid = rep.lhs / (rep.mid + 1e-300);
    rep.ratio_mid_rhs = rep.mid / (rep.rhs + 1e-300);
    return rep;
}

}  // namespace beurlab
