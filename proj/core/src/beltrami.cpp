#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "beurlab/beltrami.hpp"
#include "beurlab/operators.hpp"

namespace beurlab {

namespace {

double l2_norm(const GridFunction& g) { return lp_norm(g, 2.0); }

double smoothstep5(double t) {  // quintic, 0 -> 1 with two flat derivatives
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

void validate_coefficient(const BeltramiCoefficient& c) {
    if (!(c.k < 1.0))
        throw std::invalid_argument("BeltramiCoefficient: sup |mu| must be < 1");
    const double half = 0.5 * c.mu.box().width();
    if (!(c.support_radius < 0.95 * half))
        throw std::invalid_argument("BeltramiCoefficient: support not compactly inside the box");
}

}  // namespace

BeltramiCoefficient BeltramiCoefficient::mollified_disk(Box box, int n, double k,
                                                        double radius, double width) {
    if (!(width > 0.0 && width < 1.0))
        throw std::invalid_argument("mollified_disk: width must be in (0, 1)");
    BeltramiCoefficient out;
    out.mu = GridFunction(box, n);
    const double r0 = radius * (1.0 - width);
    out.mu.fill([&](cplx z) {
        const double r = std::abs(z);
        if (r <= r0) return cplx{k, 0.0};
        if (r >= radius) return cplx{0.0, 0.0};
        return cplx{k * (1.0 - smoothstep5((r - r0) / (radius - r0))), 0.0};
    });
    out.k = std::abs(k);
    out.support_radius = radius;
    validate_coefficient(out);
    return out;
}

BeltramiCoefficient BeltramiCoefficient::from_grid(GridFunction mu) {
    BeltramiCoefficient out;
    out.k = 0.0;
    out.support_radius = 0.0;
    const int n = mu.size();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double a = std::abs(mu.at(i, j));
            if (a > out.k) out.k = a;
            if (a > 1e-14) out.support_radius = std::max(out.support_radius, std::abs(mu.point(i, j)));
        }
    }
    out.mu = std::move(mu);
    validate_coefficient(out);
    return out;
}

SeriesState neumann_h(const BeltramiCoefficient& mu, double tol, int max_terms) {
    validate_coefficient(mu);
    if (max_terms < 1) throw std::invalid_argument("neumann_h: max_terms must be >= 1");
    const GridFunction& m = mu.mu;
    const int n = m.size();
    ConvOperator B(m.box(), n, ConvOperator::Kind::beurling_free);

    SeriesState st;
    {  // L2-isometry gate on a smooth compactly supported radial bump.  The
       // free-space transform preserves the L2 norm over the whole plane; the
       // window only misses the bump's exterior field -M/(pi z^2), whose
       // energy beyond a centered square of half-width s is
       // (M/pi)^2 (pi/2 + 1) / s^2.  Measured over predicted should be 1.
        GridFunction bump(m.box(), n);
        const double half = 0.25 * m.box().width();
        const cplx c{0.5 * (m.box().x0 + m.box().x1), 0.5 * (m.box().y0 + m.box().y1)};
        bump.fill([&](cplx z) {
            const double r2 = std::norm(z - c) / (half * half);
            return r2 < 1.0 ? cplx{std::exp(-1.0 / (1.0 - r2)), 0.0} : cplx{0.0, 0.0};
        });
        double mass = 0.0;
        for (const cplx& v : bump.data()) mass += v.real();
        mass *= bump.spacing() * bump.spacing();
        const double nb = l2_norm(bump);
        const double s = 0.5 * m.box().width();
        const double tail = (mass / M_PI) * (mass / M_PI) * (0.5 * M_PI + 1.0) / (s * s);
        const double predicted = std::sqrt(std::max(1e-300, 1.0 - tail / (nb * nb)));
        st.isometry_ratio = l2_norm(B.apply(bump)) / (nb * predicted);
        if (!(st.isometry_ratio > 0.99 && st.isometry_ratio < 1.01))
            throw std::runtime_error("neumann_h: FFT Beurling failed the L2-isometry gate");
    }

    GridFunction h = m;
    GridFunction t = m;
    st.term_norms.push_back(l2_norm(t));
    for (int it = 1; it <= max_terms; ++it) {
        GridFunction Bt = B.apply(t);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) t.at(i, j) = m.at(i, j) * Bt.at(i, j);
        const double tn = l2_norm(t);
        st.term_norms.push_back(tn);
        st.residuals.push_back(tn);  // r_{it-1} = ||t_it||_2
        for (std::size_t c = 0; c < h.data().size(); ++c) h.data()[c] += t.data()[c];
        if (tn <= tol) {
            st.converged = true;
            break;
        }
    }
    if (!st.converged) {
        // one more application for the honest final residual
        GridFunction Bt = B.apply(t);
        GridFunction next(m.box(), n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) next.at(i, j) = m.at(i, j) * Bt.at(i, j);
        const double tn = l2_norm(next);
        st.residuals.push_back(tn);
        st.converged = tn <= tol;
    }
    st.h = std::move(h);
    return st;
}

PrincipalSolution principal_solution(const BeltramiCoefficient& mu, const SeriesState& st) {
    if (!st.converged)
        throw std::runtime_error("principal_solution: Neumann series did not converge");
    const GridFunction& m = mu.mu;
    const int n = m.size();

    ConvOperator C(m.box(), n, ConvOperator::Kind::cauchy_free);
    PrincipalSolution out;
    out.displacement = C.apply(st.h);

    const GridFunction db = d_dzbar(out.displacement);
    const GridFunction dz = d_dz(out.displacement);
    std::vector<double> resid;
    resid.reserve(static_cast<std::size_t>(n) * n / 4);
    const double margin = 0.1 * m.box().width();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const cplx z = m.point(i, j);
            if (std::min({z.real() - m.box().x0, m.box().x1 - z.real(),
                          z.imag() - m.box().y0, m.box().y1 - z.imag()}) < margin)
                continue;
            const cplx df = 1.0 + dz.at(i, j);
            resid.push_back(std::abs(db.at(i, j) - m.at(i, j) * df) /
                            (std::abs(df) + 1e-12));
        }
    }
    std::nth_element(resid.begin(), resid.begin() + resid.size() / 2, resid.end());
    out.residual_median = resid[resid.size() / 2];

    // decay model |f(z) - z| ~ |C1| / |z| on a ring near the box edge
    cplx c1{0.0, 0.0};
    for (const cplx& v : st.h.data()) c1 += v;
    c1 *= m.spacing() * m.spacing() / M_PI;
    const double half = 0.5 * m.box().width();
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const cplx z = m.point(i, j);
            const double rim = std::max(std::abs(z.real()), std::abs(z.imag()));
            if (rim < 0.85 * half || rim > 0.95 * half) continue;
            const double model = std::abs(c1) / std::abs(z);
            worst = std::max(worst, std::abs(out.displacement.at(i, j)) / (model + 1e-300));
        }
    }
    out.edge_model_ratio = worst;
    return out;
}

IterateGrowthResult iterate_growth(const Domain& dom, int n, double p, int m_max,
                                   int grid_n, double collar) {
    if (n < 0) throw std::invalid_argument("iterate_growth: n must be >= 0");
    if (!(p > 0.0)) throw std::invalid_argument("iterate_growth: p must be positive");
    if (m_max < 1) throw std::invalid_argument("iterate_growth: m_max must be >= 1");
    if (!dom.bounded()) throw std::invalid_argument("iterate_growth: bounded domains only");

    const Box bb = dom.bounding_box(0.05 * dom.diameter());
    GridFunction field(bb, grid_n);
    const GridMask inside =
        GridMask::from_predicate(bb, grid_n, [&](cplx z) { return dom.contains(z); });
    const GridMask core = strip_collar(inside, collar);

    IterateGrowthResult out;
    out.grid_n = grid_n;
    out.collar = collar;
    for (int m = 1; m <= m_max; ++m) {
        const auto [gidx, cm] = beurling_iterate_index(m);
        // per-alpha ladder outcomes, resolved once per m
        struct Term {
            double scale = 0.0;
            MultiIndex idx{};
        };
        std::vector<Term> terms;
        if (n == 0) {
            terms.push_back({std::abs(cm), gidx});
        } else {
            for (int a = 0; a <= n; ++a) {
                const LadderResult lr = derivative_ladder(gidx, MultiIndex{a, n - a});
                if (lr.kind == LadderCase::zero) continue;
                if (lr.kind != LadderCase::reduce)
                    throw std::logic_error("iterate_growth: unexpected ladder case");
                terms.push_back({std::abs(cm) * std::abs(lr.constant), lr.reduced});
            }
        }
        for (int j = 0; j < grid_n; ++j) {
            for (int i = 0; i < grid_n; ++i) {
                if (!core.get(i, j)) {
                    field.at(i, j) = {0.0, 0.0};
                    continue;
                }
                const cplx z = field.point(i, j);
                double acc = 0.0;
                for (const Term& t : terms)
                    acc += t.scale * std::abs(t_char_contour(dom, t.idx, z).value);
                field.at(i, j) = {acc, 0.0};
            }
        }
        out.ms.push_back(m);
        out.norms.push_back(lp_norm(field, core, p));
    }

    // fit log(norm) - (n+1) log m = log C + m log base
    const double floor = 1e-14;
    double peak = 0.0;
    for (double v : out.norms) peak = std::max(peak, v);
    out.at_noise_floor = peak < 1e-10;
    if (out.at_noise_floor) {
        out.fit_c = peak;
        out.fit_base = 1.0;
        return out;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = static_cast<double>(out.ms.size());
    for (std::size_t i = 0; i < out.ms.size(); ++i) {
        const double x = out.ms[i];
        const double y = std::log(std::max(out.norms[i], floor)) -
                         (n + 1.0) * std::log(static_cast<double>(out.ms[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double icept = (sy - slope * sx) / count;
    out.fit_base = std::exp(slope);
    out.fit_c = std::exp(icept);
    return out;
}

CornerDivergenceResult corner_divergence(double p, const std::vector<double>& deltas,
                                         int grid_n) {
    if (!(p > 0.0)) throw std::invalid_argument("corner_divergence: p must be positive");
    if (deltas.empty()) throw std::invalid_argument("corner_divergence: no deltas");
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("corner_divergence: deltas must be decreasing");
    const double h = 1.0 / grid_n;
    if (!(deltas.back() >= 4.0 * h))
        throw std::invalid_argument("corner_divergence: grid too coarse for the smallest delta");

    const Domain q = Domain::square({0.0, 0.0}, 0.5);
    const Box bb{-0.5, -0.5, 0.5, 0.5};
    const cplx corners[4] = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};

    // d_z B chi_Q = (2/pi) T^{(-3,0)} chi_Q, evaluated once on the finest grid
    GridFunction field(bb, grid_n);
    for (int j = 0; j < grid_n; ++j) {
        for (int i = 0; i < grid_n; ++i) {
            const cplx z = field.point(i, j);
            field.at(i, j) = 2.0 / M_PI * t_char_contour(q, MultiIndex{-3, 0}, z).value;
        }
    }

    CornerDivergenceResult out;
    out.grid_n = grid_n;
    out.deltas = deltas;
    out.expected_slope = (2.0 - p) / p;
    for (double d : deltas) {
        const GridMask mask = GridMask::from_predicate(bb, grid_n, [&](cplx z) {
            if (!q.contains(z)) return false;
            for (const cplx& w : corners)
                if (std::abs(z - w) <= d) return false;
            return true;
        });
        out.norms.push_back(lp_norm(field, mask, p));
    }

    const std::size_t m = deltas.size();
    {  // power fit: log norm = a + slope log delta
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const double x = std::log(deltas[i]), y = std::log(out.norms[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const double a = (sy - out.slope * sx) / m;
        double res = 0, tot = 0, mean = sy / m;
        for (std::size_t i = 0; i < m; ++i) {
            const double fit = a + out.slope * std::log(deltas[i]);
            res += std::pow(std::log(out.norms[i]) - fit, 2);
            tot += std::pow(std::log(out.norms[i]) - mean, 2);
        }
        out.power_fit_resid = std::sqrt(res / std::max(tot, 1e-300));
    }
    {  // log model: norm^2 = a + b log(1/delta)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const double x = std::log(1.0 / deltas[i]), y = out.norms[i] * out.norms[i];
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const double a = (sy - b * sx) / m;
        double res = 0, tot = 0;
        double meanl = 0;
        for (std::size_t i = 0; i < m; ++i) meanl += std::log(out.norms[i]);
        meanl /= m;
        for (std::size_t i = 0; i < m; ++i) {
            const double fit = std::sqrt(std::max(a + b * std::log(1.0 / deltas[i]), 1e-300));
            res += std::pow(std::log(out.norms[i]) - std::log(fit), 2);
            tot += std::pow(std::log(out.norms[i]) - meanl, 2);
        }
        out.log_fit_resid = std::sqrt(res / std::max(tot, 1e-300));
    }
    return out;
}

}  // namespace beurlab
