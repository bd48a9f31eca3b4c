#include "beurlab/approx.hpp"

#include <algorithm>
#include <cmath>

#include "beurlab/quadrature.hpp"

namespace beurlab {

double Poly1D::operator()(double x) const {
    const double t = x - center;
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
    return v;
}

Poly1D Poly1D::derivative() const {
    Poly1D d;
    d.center = center;
    for (std::size_t i = 1; i < coeffs.size(); ++i)
        d.coeffs.push_back(coeffs[i] * static_cast<double>(i));
    if (d.coeffs.empty()) d.coeffs = {0.0};
    return d;
}

namespace {

// Legendre polynomial P_k on [-1,1] expanded in monomials, via the
// three-term recurrence applied to coefficient vectors.
std::vector<std::vector<double>> legendre_monomials(int n) {
    std::vector<std::vector<double>> P(n + 1);
    P[0] = {1.0};
    if (n >= 1) P[1] = {0.0, 1.0};
    for (int k = 2; k <= n; ++k) {
        std::vector<double> cur(k + 1, 0.0);
        for (std::size_t i = 0; i < P[k - 1].size(); ++i)
            cur[i + 1] += (2.0 * k - 1.0) / k * P[k - 1][i];
        for (std::size_t i = 0; i < P[k - 2].size(); ++i)
            cur[i] -= (k - 1.0) / k * P[k - 2][i];
        P[k] = std::move(cur);
    }
    return P;
}

double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return v;
}

// Locate sign changes of g on [a, b] by dense scan + bisection.
std::vector<double> locate_zeros(const std::function<double(double)>& g, double a, double b,
                                 int scan = 4096) {
    std::vector<double> zs;
    double xp = a, gp = g(a);
    for (int i = 1; i <= scan; ++i) {
        const double x = a + (b - a) * i / scan;
        const double gx = g(x);
        if ((gp < 0.0 && gx > 0.0) || (gp > 0.0 && gx < 0.0)) {
            double lo = xp, hi = x, glo = gp;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                if ((glo < 0.0) == (gm < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
                if (hi - lo < 1e-15 * (b - a)) break;
            }
            zs.push_back(0.5 * (lo + hi));
        } else if (gx == 0.0) {
            zs.push_back(x);
        }
        xp = x;
        gp = gx;
    }
    return zs;
}

double integrate_abs(const std::function<double(double)>& g, double a, double b) {
    // Split at sign changes so each panel is single-signed, then integrate
    // adaptively (the adaptivity soaks up kinks of g itself).
    std::vector<double> cuts = locate_zeros(g, a, b);
    cuts.insert(cuts.begin(), a);
    cuts.push_back(b);
    double total = 0.0;
    auto ag = [&](double x) { return std::abs(g(x)); };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        total += integrate_adaptive(ag, cuts[i], cuts[i + 1], 1e-10, 1e-14);
    }
    return total;
}

}  // namespace

ApproxFit approx_poly(const RealFn& f, Interval I, int n) {
    if (n < 0) throw std::invalid_argument("approx_poly: degree must be >= 0");
    if (!(I.length() > 0.0)) throw std::invalid_argument("approx_poly: empty interval");

    ApproxFit fit;
    fit.interval = I;
    fit.degree = n;

    const double mid = I.mid(), half = 0.5 * I.length();
    const auto P = legendre_monomials(n);

    // Orthonormal basis on I: phi_k(x) = sqrt((2k+1)/|I|) P_k((x-mid)/half).
    // Adaptive quadrature per coefficient: the corpus includes kinks and
    // cusps, for which a fixed Gauss rule converges too slowly.
    const auto legendre_at = [](int k, double t) {
        if (k == 0) return 1.0;
        double p0 = 1.0, p1 = t;
        for (int m = 2; m <= k; ++m) {
            const double p2 = ((2.0 * m - 1.0) * t * p1 - (m - 1.0) * p0) / m;
            p0 = p1;
            p1 = p2;
        }
        return p1;
    };
    std::vector<double> coef(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        const double nk = std::sqrt((2.0 * k + 1.0) / I.length());
        coef[k] = integrate_adaptive(
            [&](double x) { return f(x) * nk * legendre_at(k, (x - mid) / half); }, I.a, I.b,
            1e-12, 1e-15);
    }

    // Assemble R in the centered monomial basis.
    fit.poly.center = mid;
    fit.poly.coeffs.assign(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        const double scale = coef[k] * std::sqrt((2.0 * k + 1.0) / I.length());
        for (std::size_t i = 0; i < P[k].size(); ++i)
            fit.poly.coeffs[i] += scale * P[k][i] / std::pow(half, static_cast<double>(i));
    }

    // Diagnostics, integrated independently of the projection quadrature.
    auto resid = [&](double x) { return fit.poly(x) - f(x); };
    fit.ortho_residuals.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        fit.ortho_residuals[j] = integrate_adaptive(
            [&](double x) { return resid(x) * std::pow(x, j); }, I.a, I.b, 1e-12, 1e-15);
    }
    fit.l1_norm = integrate_abs([&](double x) { return f(x); }, I.a, I.b);
    fit.l1_residual = integrate_abs(resid, I.a, I.b);

    double sup_r = 0.0;
    for (int k = 0; k <= 2048; ++k) {
        const double x = I.a + I.length() * k / 2048.0;
        sup_r = std::max(sup_r, std::abs(fit.poly(x)));
    }
    fit.sup_ratio = fit.l1_norm > 0.0 ? sup_r * I.length() / fit.l1_norm : 0.0;

    // Safety net on the defining orthogonality conditions; the absolute term
    // keeps near-zero data from tripping the relative gate on rounding noise.
    const double powfac = std::pow(std::max(1.0, std::max(std::abs(I.a), std::abs(I.b))),
                                   static_cast<double>(n));
    const double gate = 1e-6 * fit.l1_norm * powfac + 1e-12 * powfac;
    for (int j = 0; j <= n; ++j) {
        if (std::abs(fit.ortho_residuals[j]) > gate)
            throw std::runtime_error("approx_poly: orthogonality residual out of tolerance");
    }
    return fit;
}

BetaRecord beta_coefficient(const RealFn& f, Interval I, int n) {
    BetaRecord rec;
    rec.interval = I;
    rec.degree = n;
    rec.fit = approx_poly(f, I.dilate(3.0), n);
    const double len = I.length();
    rec.beta = rec.fit.l1_residual / (len * len);
    return rec;
}

namespace {

template <typename Fn, typename Val>
Val finite_difference_impl(const Fn& f, double z, double h, int order) {
    if (order < 1) throw std::invalid_argument("finite_difference: order must be >= 1");
    Val acc{};
    double sign = (order % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j <= order; ++j) {
        acc += sign * binomial(order, j) * f(z + j * h);
        sign = -sign;
    }
    return acc;
}

}  // namespace

double finite_difference(const RealFn& f, double z, double h, int order) {
    return finite_difference_impl<RealFn, double>(f, z, h, order);
}

cplx finite_difference(const CplxFn& f, double z, double h, int order) {
    return finite_difference_impl<CplxFn, cplx>(f, z, h, order);
}

BesovBetaResult besov_betas(const RealFn& f, double s, double p, int n, Interval base,
                            int depth) {
    if (p < 1.0) throw std::invalid_argument("besov_betas: p must be >= 1");
    if (n < static_cast<int>(std::floor(s)))
        throw std::invalid_argument("besov_betas: need n >= [s]");
    if (depth < 1) throw std::invalid_argument("besov_betas: depth must be >= 1");

    BesovBetaResult out;
    // Coarsest canonical level whose aligned intervals fit inside the base.
    int j0 = static_cast<int>(std::ceil(-std::log2(base.length())));
    while (true) {
        const double side = std::ldexp(1.0, -j0);
        const std::int64_t k_lo = static_cast<std::int64_t>(std::ceil(base.a / side - 1e-12));
        const std::int64_t k_hi = static_cast<std::int64_t>(std::floor(base.b / side + 1e-12)) - 1;
        if (k_hi >= k_lo) break;
        ++j0;
        if (j0 > 60) throw std::runtime_error("besov_betas: no dyadic interval fits the base");
    }

    double power_sum = 0.0;
    for (int j = j0; j < j0 + depth; ++j) {
        const double side = std::ldexp(1.0, -j);
        const std::int64_t k_lo = static_cast<std::int64_t>(std::ceil(base.a / side - 1e-12));
        const std::int64_t k_hi = static_cast<std::int64_t>(std::floor(base.b / side + 1e-12)) - 1;
        double level = 0.0;
        for (std::int64_t k = k_lo; k <= k_hi; ++k) {
            const DyadicInterval di{j, k};
            const BetaRecord rec = beta_coefficient(f, di.interval(), n);
            level += std::pow(rec.beta / std::pow(side, s - 1.0), p) * side;
            ++out.interval_count;
        }
        out.levels.push_back(j);
        out.level_sums.push_back(level);
        power_sum += level;
    }
    out.value = std::pow(power_sum, 1.0 / p);
    return out;
}

BesovDiffResult besov_differences(const CplxFn& f, double s, double p, double q, int M,
                                  Interval window, int depth, int per_octave) {
    if (M < static_cast<int>(std::floor(s)) + 1)
        throw std::invalid_argument("besov_differences: need M >= [s] + 1");
    if (p < 1.0 || q < 1.0) throw std::invalid_argument("besov_differences: p, q >= 1");
    if (depth < 1 || per_octave < 1)
        throw std::invalid_argument("besov_differences: bad resolution parameters");

    BesovDiffResult out;
    out.difference_order = M;
    out.h_max = window.length() / (2.0 * M);
    out.h_min = out.h_max * std::ldexp(1.0, -depth);

    // || D^M_h f ||_{L^p(W_h)} with W_h = [a, b - M h].
    const auto lp_of_h = [&](double h) {
        const double bh = window.b - M * h;
        if (bh <= window.a) return 0.0;
        const int panels = 256;
        double acc = 0.0;
        const double step = (bh - window.a) / panels;
        for (int k = 0; k < panels; ++k) {
            acc += integrate_gl(
                [&](double x) { return std::pow(std::abs(finite_difference(f, x, h, M)), p); },
                window.a + k * step, window.a + (k + 1) * step, 4);
        }
        return std::pow(acc, 1.0 / p);
    };

    // Outer log-grid integral: substitute u = log h; trapezoid in u, with the
    // +-h symmetry contributing a factor 2.
    const int nh = depth * per_octave;
    const double du = std::log(2.0) / per_octave;
    double acc = 0.0;
    for (int i = 0; i <= nh; ++i) {
        const double h = out.h_max * std::exp(-du * i);
        const double g = std::pow(lp_of_h(h), q) * std::pow(h, -s * q);
        acc += (i == 0 || i == nh) ? 0.5 * g : g;
    }
    acc *= du * 2.0;
    out.value = std::pow(acc, 1.0 / q);
    return out;
}

BesovDiffResult besov_differences(const RealFn& f, double s, double p, double q, int M,
                                  Interval window, int depth, int per_octave) {
    CplxFn g = [&f](double x) { return cplx{f(x), 0.0}; };
    return besov_differences(g, s, p, q, M, window, depth, per_octave);
}

}  // namespace beurlab
