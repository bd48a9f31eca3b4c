#include "beurlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace beurlab {

namespace {

void require_square(const Box& box, int n) {
    if (n <= 0) throw std::invalid_argument("grid: size must be positive");
    if (!box.finite()) throw std::invalid_argument("grid: box must be finite");
    if (std::abs(box.width() - box.height()) > 1e-12 * std::max(box.width(), box.height()))
        throw std::invalid_argument("grid: box must be square");
}

}  // namespace

GridFunction::GridFunction(Box box, int n) : box_(box), n_(n) {
    require_square(box, n);
    h_ = box.width() / n;
    data_.assign(static_cast<std::size_t>(n) * n, cplx{0.0, 0.0});
}

void GridFunction::fill(const std::function<cplx(cplx)>& f) {
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i) at(i, j) = f(point(i, j));
}

cplx GridFunction::sample_nearest(cplx z) const {
    int i = static_cast<int>(std::floor((z.real() - box_.x0) / h_));
    int j = static_cast<int>(std::floor((z.imag() - box_.y0) / h_));
    i = std::clamp(i, 0, n_ - 1);
    j = std::clamp(j, 0, n_ - 1);
    return at(i, j);
}

cplx GridFunction::sample_bilinear(cplx z) const {
    double u = (z.real() - box_.x0) / h_ - 0.5;
    double v = (z.imag() - box_.y0) / h_ - 0.5;
    u = std::clamp(u, 0.0, static_cast<double>(n_ - 1));
    v = std::clamp(v, 0.0, static_cast<double>(n_ - 1));
    const int i0 = std::min(static_cast<int>(u), n_ - 2);
    const int j0 = std::min(static_cast<int>(v), n_ - 2);
    const double fu = u - i0, fv = v - j0;
    return (1.0 - fu) * (1.0 - fv) * at(i0, j0) + fu * (1.0 - fv) * at(i0 + 1, j0) +
           (1.0 - fu) * fv * at(i0, j0 + 1) + fu * fv * at(i0 + 1, j0 + 1);
}

GridMask::GridMask(Box box, int n, bool value) : box_(box), n_(n) {
    require_square(box, n);
    h_ = box.width() / n;
    data_.assign(static_cast<std::size_t>(n) * n, value ? 1 : 0);
}

std::size_t GridMask::count() const {
    std::size_t c = 0;
    for (unsigned char v : data_) c += v;
    return c;
}

GridMask GridMask::from_predicate(Box box, int n, const std::function<bool(cplx)>& pred) {
    GridMask m(box, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m.set(i, j, pred(m.point(i, j)));
    return m;
}

double lp_norm(const GridFunction& g, const GridMask& mask, double p) {
    if (g.size() != mask.size()) throw std::invalid_argument("lp_norm: size mismatch");
    const int n = g.size();
    if (std::isinf(p)) {
        double m = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (mask.get(i, j)) m = std::max(m, std::abs(g.at(i, j)));
        return m;
    }
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1 or inf");
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (mask.get(i, j)) acc += std::pow(std::abs(g.at(i, j)), p);
    return std::pow(acc * g.spacing() * g.spacing(), 1.0 / p);
}

double lp_norm(const GridFunction& g, double p) {
    GridMask all(g.box(), g.size(), true);
    return lp_norm(g, all, p);
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    if (a.size() != b.size()) throw std::invalid_argument("grid difference: size mismatch");
    GridFunction out = a;
    for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] -= b.data()[k];
    return out;
}

namespace {

// 1-D squared-distance transform (Felzenszwalb & Huttenlocher).
void dt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
           std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

std::vector<double> distance_transform_sq(const GridMask& seed) {
    const int n = seed.size();
    const double INF = 1e18;
    std::vector<double> field(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            field[static_cast<std::size_t>(j) * n + i] = seed.get(i, j) ? 0.0 : INF;

    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    // Columns.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) f[j] = field[static_cast<std::size_t>(j) * n + i];
        dt_1d(f, d, v, z);
        for (int j = 0; j < n; ++j) field[static_cast<std::size_t>(j) * n + i] = d[j];
    }
    // Rows.
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) f[i] = field[static_cast<std::size_t>(j) * n + i];
        dt_1d(f, d, v, z);
        for (int i = 0; i < n; ++i) field[static_cast<std::size_t>(j) * n + i] = d[i];
    }
    return field;
}

GridMask strip_collar(const GridMask& inside, double collar) {
    const int n = inside.size();
    GridMask outside(inside.box(), n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) outside.set(i, j, !inside.get(i, j));
    const std::vector<double> dsq = distance_transform_sq(outside);
    const double rg = collar / inside.spacing();  // collar in grid units
    GridMask out(inside.box(), n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out.set(i, j,
                    inside.get(i, j) && dsq[static_cast<std::size_t>(j) * n + i] > rg * rg);
    return out;
}

namespace {

GridFunction wirtinger(const GridFunction& g, double cx, double cy) {
    // (d/dz) = (d/dx - i d/dy)/2, (d/dzbar) = (d/dx + i d/dy)/2; cx, cy are
    // the +-1 signs multiplying the i*d/dy part.
    (void)cx;
    const int n = g.size();
    const double h = g.spacing();
    GridFunction out(g.box(), n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            cplx dx, dy;
            if (i == 0) dx = (g.at(1, j) - g.at(0, j)) / h;
            else if (i == n - 1) dx = (g.at(n - 1, j) - g.at(n - 2, j)) / h;
            else dx = (g.at(i + 1, j) - g.at(i - 1, j)) / (2.0 * h);
            if (j == 0) dy = (g.at(i, 1) - g.at(i, 0)) / h;
            else if (j == n - 1) dy = (g.at(i, n - 1) - g.at(i, n - 2)) / h;
            else dy = (g.at(i, j + 1) - g.at(i, j - 1)) / (2.0 * h);
            out.at(i, j) = 0.5 * (dx + cplx{0.0, cy} * dy);
        }
    }
    return out;
}

}  // namespace

GridFunction d_dz(const GridFunction& g) { return wirtinger(g, 1.0, -1.0); }
GridFunction d_dzbar(const GridFunction& g) { return wirtinger(g, 1.0, 1.0); }

}  // namespace beurlab
