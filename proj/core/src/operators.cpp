#include <cmath>
#include <stdexcept>

#include "beurlab/operators.hpp"

namespace beurlab {

cplx ipow(cplx z, int k) {
    if (k == 0) return {1.0, 0.0};
    if (z == cplx{0.0, 0.0}) {
        if (k > 0) return {0.0, 0.0};
        throw std::invalid_argument("ipow: negative power of zero");
    }
    unsigned long long e =
        k < 0 ? static_cast<unsigned long long>(-static_cast<long long>(k))
              : static_cast<unsigned long long>(k);
    cplx base = z, acc{1.0, 0.0};
    while (e != 0) {
        if (e & 1ull) acc *= base;
        base *= base;
        e >>= 1;
    }
    return k < 0 ? 1.0 / acc : acc;
}

cplx kernel(MultiIndex g, cplx z) {
    if (z == cplx{0.0, 0.0}) throw std::invalid_argument("kernel: evaluation at the singularity");
    return ipow(z, g.g1) * ipow(std::conj(z), g.g2);
}

std::pair<MultiIndex, cplx> beurling_iterate_index(int m) {
    if (m < 1) throw std::invalid_argument("beurling_iterate_index: m must be >= 1");
    const double c = (m % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(m) / M_PI;
    return {MultiIndex{-m - 1, m - 1}, cplx{c, 0.0}};
}

namespace {

double falling(int g, int a) {
    double v = 1.0;
    for (int i = 0; i < a; ++i) v *= static_cast<double>(g - i);
    return v;
}

double poly_eval_plain(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

double binom_d(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
    return v;
}

}  // namespace

LadderResult derivative_ladder(MultiIndex g, MultiIndex a) {
    if (a.g1 < 0 || a.g2 < 0)
        throw std::invalid_argument("derivative_ladder: derivative orders must be nonnegative");
    if (a.g1 + a.g2 < 1)
        throw std::invalid_argument("derivative_ladder: need at least one derivative");
    if (g.g1 < 0 && g.g2 < 0)
        throw std::invalid_argument(
            "derivative_ladder: doubly negative kernel indices are outside the family");

    LadderResult out;
    // identity pairs: the last derivative lands exactly on the point mass
    if (g.g2 == -1 && g.g1 >= 0 && a.g1 == g.g1 + 1 && a.g2 == 0) {
        out.kind = LadderCase::identity;
        out.constant = M_PI * std::tgamma(static_cast<double>(g.g1 + 1));
        out.constant_measured = true;
        return out;
    }
    if (g.g1 == -1 && g.g2 >= 0 && a.g2 == g.g2 + 1 && a.g1 == 0) {
        out.kind = LadderCase::identity;
        out.constant = M_PI * std::tgamma(static_cast<double>(g.g2 + 1));
        out.constant_measured = true;
        return out;
    }
    // zero: a polynomial factor of the kernel is differentiated away; the
    // residual point-mass derivatives annihilate locally constant data
    if ((g.g1 >= 0 && a.g1 > g.g1) || (g.g2 >= 0 && a.g2 > g.g2)) {
        out.kind = LadderCase::zero;
        out.constant = 0.0;
        return out;
    }
    out.kind = LadderCase::reduce;
    out.constant = falling(g.g1, a.g1) * falling(g.g2, a.g2);
    out.reduced = g - a;
    const double cap = std::pow(static_cast<double>(g.modulus() + a.g1 + a.g2),
                                static_cast<double>(a.g1 + a.g2));
    if (!(std::abs(out.constant) <= cap))
        throw std::logic_error("derivative_ladder: reduction constant exceeds its bound");
    return out;
}

EvalResult t_f(const Domain& dom, MultiIndex g, cplx z) {
    // the ring engine integrates locally integrable kernels directly and
    // falls back to principal-value cancellation for homogeneity <= -2
    return t_char_pv(dom, g, z);
}

EvalResult t_f(MultiIndex g, const GridFunction& f, cplx z) {
    const int hom = g.homogeneity();
    if (hom <= -2)
        throw std::invalid_argument(
            "t_f(grid): kernel too singular for cell sums; use the principal-value routes");
    const int n = f.size();
    const double h = f.spacing();
    const bool radial = (g.g1 == g.g2);

    auto cell_sum = [&](double skip) {
        cplx acc{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const cplx w = f.point(i, j);
                if (std::abs(w - z) <= skip) continue;
                acc += f.at(i, j) * kernel(g, z - w);
            }
        }
        acc *= h * h;
        // for a radial kernel the skipped disk carries a first-order term
        if (radial)
            acc += f.sample_bilinear(z) * 2.0 * M_PI * std::pow(skip, hom + 2) /
                   static_cast<double>(hom + 2);
        return acc;
    };

    const cplx v2 = cell_sum(2.0 * h);
    const cplx v3 = cell_sum(3.0 * h);
    EvalResult res;
    res.value = v2;
    res.method = EvalMethod::pv_quadrature;
    res.error = std::abs(v2 - v3) + 1e-14 * std::abs(v2);
    return res;
}

YoungReport young_bound_check(const Domain& dom, MultiIndex nu, const GridFunction& f,
                              double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("young_bound_check: p must be >= 1");
    const bool supported = (nu == MultiIndex{0, 0}) || (nu == MultiIndex{-1, 0}) ||
                           (nu == MultiIndex{0, -1});
    if (!supported)
        throw std::invalid_argument(
            "young_bound_check: supported indices are (0,0), (-1,0), (0,-1)");
    const double diam = dom.diameter();  // throws on unbounded domains
    const int hom = nu.homogeneity();

    GridFunction T;
    if (nu == MultiIndex{0, 0}) {
        cplx total{0.0, 0.0};
        for (const cplx& v : f.data()) total += v;
        total *= f.spacing() * f.spacing();
        T = GridFunction(f.box(), f.size());
        for (cplx& v : T.data()) v = total;
    } else if (nu == MultiIndex{-1, 0}) {
        T = fft_cauchy(f);
        for (cplx& v : T.data()) v *= M_PI;
    } else {
        GridFunction fc = f;
        for (cplx& v : fc.data()) v = std::conj(v);
        T = fft_cauchy(fc);
        for (cplx& v : T.data()) v = M_PI * std::conj(v);
    }

    const GridMask mask = GridMask::from_predicate(
        f.box(), f.size(), [&](cplx w) { return dom.contains(w); });

    YoungReport rep;
    rep.p = p;
    rep.lhs = lp_norm(T, mask, p);
    rep.f_norm = lp_norm(f, p);
    rep.bound_sharp = 2.0 * M_PI * std::pow(diam, hom + 2) / (hom + 2) * rep.f_norm;
    rep.bound_displayed = std::pow(diam, hom + 2) * rep.f_norm;
    rep.holds_sharp = rep.lhs <= rep.bound_sharp * (1.0 + 1e-9);
    rep.holds_displayed = rep.lhs <= rep.bound_displayed * (1.0 + 1e-9);
    return rep;
}

FlatPolyResult flat_poly_bound_probe(const Poly1D& P, int j2, cplx z, double rho_int,
                                     double rho_ext, double delta, double R) {
    if (P.coeffs.empty()) throw std::invalid_argument("flat_poly_bound_probe: empty polynomial");
    const int n = P.degree();
    if (n < 1) throw std::invalid_argument("flat_poly_bound_probe: degree must be >= 1");
    if (j2 < 0) throw std::invalid_argument("flat_poly_bound_probe: j2 must be >= 0");
    if (!(rho_int > 0.0) || !(rho_ext >= rho_int))
        throw std::invalid_argument("flat_poly_bound_probe: need 0 < rho_int <= rho_ext");
    if (!(delta > 0.0) || !(R > 0.0))
        throw std::invalid_argument("flat_poly_bound_probe: delta and R must be positive");

    // plain coefficients about x = 0
    std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k)
        for (int i = 0; i <= k; ++i)
            a[i] += P.coeffs[k] * binom_d(k, i) * std::pow(-P.center, k - i);

    std::vector<double> slack(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> cap(static_cast<std::size_t>(n) + 1, 0.0);
    cap[0] = std::pow(3.0, n) * delta * rho_int * rho_int / R;
    cap[1] = std::pow(3.0, n - 1) * delta * rho_int / R;
    for (int j = 2; j <= n; ++j)
        cap[j] = std::pow(3.0, n - j) * delta / (std::tgamma(j + 1.0) * std::pow(R, j - 1));
    for (int j = 0; j <= n; ++j) slack[j] = std::abs(a[j]) / cap[j];
    if (n >= 2) {
        for (int j = 0; j <= n; ++j)
            if (slack[j] > 1.0 + 1e-9)
                throw std::invalid_argument(
                    "flat_poly_bound_probe: coefficient bound violated at index " +
                    std::to_string(j));
    }

    if (std::max(std::abs(z.real()), std::abs(z.imag())) >= rho_int)
        throw std::invalid_argument("flat_poly_bound_probe: z outside the flat square");
    if (!(z.imag() > poly_eval_plain(a, z.real())))
        throw std::invalid_argument("flat_poly_bound_probe: z not inside the domain");

    const int j1 = j2 + n + 2;
    const MultiIndex g{-j1, j2};

    PvOptions opts;
    opts.r_max = std::min(1e9, std::max(rho_int * std::pow(2.0 * M_PI * 1e10 / n, 1.0 / n),
                                        100.0 * std::max({1.0, std::abs(z), rho_ext})));
    const Domain dom = Domain::poly_graph(a);
    const EvalResult pv = t_char_pv(dom, g, z, opts);

    FlatPolyResult out;
    out.value = pv.value;
    out.quad_error = pv.error;
    out.tail_bound = 2.0 * M_PI * std::pow(opts.r_max, -n) / n;
    out.j1 = j1;
    out.j2 = j2;
    out.degree = n;
    out.coeff_slack = std::move(slack);
    out.ratio = std::abs(pv.value) * std::pow(rho_int, n) /
                std::pow(1.0 + 16.0 * std::sqrt(rho_ext), j2);
    return out;
}

}  // namespace beurlab
