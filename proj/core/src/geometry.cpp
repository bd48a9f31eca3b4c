#include "beurlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace beurlab {

namespace {

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
    return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// DefiningFunction
// ---------------------------------------------------------------------------

DefiningFunction DefiningFunction::polynomial(std::vector<double> coeffs, int n,
                                              double delta, double R) {
    if (n < 1) throw std::invalid_argument("DefiningFunction: smoothness n must be >= 1");
    if (R <= 0.0) throw std::invalid_argument("DefiningFunction: R must be positive");
    if (delta < 0.0) throw std::invalid_argument("DefiningFunction: delta must be >= 0");
    DefiningFunction f;
    f.poly_ = true;
    f.coeffs_ = std::move(coeffs);
    if (f.coeffs_.empty()) f.coeffs_ = {0.0};
    if (f.coeffs_[0] != 0.0)
        throw std::invalid_argument("DefiningFunction: A(0) must be 0");
    f.n_ = n;
    f.delta_ = delta;
    f.R_ = R;
    return f;
}

DefiningFunction DefiningFunction::sampled(std::vector<double> values, int n,
                                           double delta, double R, Interp interp) {
    if (values.size() < 4)
        throw std::invalid_argument("DefiningFunction: need at least 4 samples");
    if (n < 1) throw std::invalid_argument("DefiningFunction: smoothness n must be >= 1");
    if (R <= 0.0) throw std::invalid_argument("DefiningFunction: R must be positive");
    DefiningFunction f;
    f.poly_ = false;
    f.samples_ = std::move(values);
    f.interp_ = interp;
    f.n_ = n;
    f.delta_ = delta;
    f.R_ = R;
    if (interp == Interp::spline) {
        // Natural cubic spline: tridiagonal solve for second derivatives.
        const std::size_t m = f.samples_.size();
        const double h = 8.0 * R / static_cast<double>(m - 1);
        std::vector<double> diag(m, 4.0), rhs(m, 0.0);
        for (std::size_t i = 1; i + 1 < m; ++i)
            rhs[i] = 6.0 * (f.samples_[i - 1] - 2.0 * f.samples_[i] + f.samples_[i + 1]) / (h * h);
        f.spline_m_.assign(m, 0.0);
        // Thomas algorithm on the interior unknowns.
        std::vector<double> c(m, 0.0);
        double beta = diag[1];
        if (m > 2) {
            f.spline_m_[1] = rhs[1] / beta;
            for (std::size_t i = 2; i + 1 < m; ++i) {
                c[i] = 1.0 / beta;
                beta = diag[i] - c[i];
                f.spline_m_[i] = (rhs[i] - f.spline_m_[i - 1]) / beta;
            }
            for (std::size_t i = m - 3; i >= 1; --i) {
                f.spline_m_[i] -= c[i + 1] * f.spline_m_[i + 1];
                if (i == 1) break;
            }
        }
    }
    return f;
}

double DefiningFunction::eval_raw(double x) const {
    if (poly_) return poly_eval(coeffs_, x);
    const std::size_t m = samples_.size();
    const double h = 8.0 * R_ / static_cast<double>(m - 1);
    double u = (x + 4.0 * R_) / h;
    std::size_t i = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, double(m - 2)));
    const double t = x - (-4.0 * R_ + static_cast<double>(i) * h);
    if (interp_ == Interp::linear) {
        const double slope = (samples_[i + 1] - samples_[i]) / h;
        return samples_[i] + slope * t;
    }
    const double mi = spline_m_[i], mi1 = spline_m_[i + 1];
    const double b = (samples_[i + 1] - samples_[i]) / h - h * (2.0 * mi + mi1) / 6.0;
    const double cq = mi / 2.0, d = (mi1 - mi) / (6.0 * h);
    return samples_[i] + t * (b + t * (cq + t * d));
}

double DefiningFunction::deriv_raw(double x, int order) const {
    if (poly_) {
        std::vector<double> c = coeffs_;
        for (int k = 0; k < order; ++k) c = poly_derivative(c);
        return poly_eval(c, x);
    }
    const std::size_t m = samples_.size();
    const double h = 8.0 * R_ / static_cast<double>(m - 1);
    double u = (x + 4.0 * R_) / h;
    std::size_t i = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, double(m - 2)));
    const double t = x - (-4.0 * R_ + static_cast<double>(i) * h);
    if (interp_ == Interp::linear) {
        if (order == 1) return (samples_[i + 1] - samples_[i]) / h;
        return 0.0;
    }
    const double mi = spline_m_[i], mi1 = spline_m_[i + 1];
    const double b = (samples_[i + 1] - samples_[i]) / h - h * (2.0 * mi + mi1) / 6.0;
    const double cq = mi / 2.0, d = (mi1 - mi) / (6.0 * h);
    switch (order) {
        case 1: return b + t * (2.0 * cq + 3.0 * d * t);
        case 2: return 2.0 * cq + 6.0 * d * t;
        case 3: return 6.0 * d;
        default: break;
    }
    // Beyond the spline's analytic order: centered difference of the cubic's
    // third derivative (piecewise constant, so this is effectively zero away
    // from knots).
    const double step = h;
    return (deriv_raw(std::min(x + step, 4.0 * R_ - 1e-12), order - 1) -
            deriv_raw(std::max(x - step, -4.0 * R_ + 1e-12), order - 1)) /
           (2.0 * step);
}

double DefiningFunction::operator()(double x) const {
    if (std::abs(x) > 4.0 * R_) return 0.0;
    return eval_raw(x);
}

double DefiningFunction::derivative(double x, int order) const {
    if (std::abs(x) > 4.0 * R_) return 0.0;
    return deriv_raw(x, order);
}

void DefiningFunction::certify(double tol, int samples) const {
    const double at0 = eval_raw(0.0);
    double scale = std::max(1.0, std::abs(delta_) * R_);
    if (std::abs(at0) > tol * scale)
        throw std::invalid_argument("DefiningFunction: A(0) != 0");
    if (n_ >= 2) {
        const double d0 = deriv_raw(0.0, 1);
        if (std::abs(d0) > std::max(tol, tol * delta_))
            throw std::invalid_argument("DefiningFunction: A'(0) != 0 with n >= 2");
    }
    const int deriv_cap = poly_ ? n_ : std::min(n_, interp_ == Interp::linear ? 1 : 2);
    for (int j = 1; j <= deriv_cap; ++j) {
        const double bound = delta_ / std::pow(R_, j - 1);
        const double slack = bound * 1e-6 + 1e-9 / std::pow(R_, j - 1);
        for (int k = 0; k < samples; ++k) {
            const double x = -4.0 * R_ + (k + 0.5) * 8.0 * R_ / samples;
            const double v = std::abs(deriv_raw(x, j));
            if (v > bound + slack) {
                std::ostringstream os;
                os << "DefiningFunction: |A^(" << j << ")(" << x << ")| = " << v
                   << " exceeds delta/R^(j-1) = " << bound;
                throw std::invalid_argument(os.str());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Box
// ---------------------------------------------------------------------------

double Box::diag() const { return std::hypot(width(), height()); }

bool Box::finite() const {
    return std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) &&
           std::isfinite(y1) && x1 > x0 && y1 > y0;
}

// ---------------------------------------------------------------------------
// Dyadic pieces
// ---------------------------------------------------------------------------

double DyadicInterval::side() const { return std::ldexp(1.0, -level); }

Interval DyadicInterval::interval() const {
    const double s = side();
    return {static_cast<double>(k) * s, static_cast<double>(k + 1) * s};
}

DyadicInterval DyadicInterval::parent() const { return {level - 1, k >> 1}; }

double DyadicCube::side() const { return std::ldexp(1.0, -level); }

cplx DyadicCube::center() const {
    const double s = side();
    return {(static_cast<double>(ix) + 0.5) * s, (static_cast<double>(iy) + 0.5) * s};
}

Box DyadicCube::box() const {
    const double s = side();
    return {static_cast<double>(ix) * s, static_cast<double>(iy) * s,
            static_cast<double>(ix + 1) * s, static_cast<double>(iy + 1) * s};
}

DyadicCube DyadicCube::parent() const { return {level - 1, ix >> 1, iy >> 1}; }

DyadicCube DyadicCube::child(int cx, int cy) const {
    return {level + 1, 2 * ix + cx, 2 * iy + cy};
}

DyadicInterval vertical_projection(const DyadicCube& q) { return {q.level, q.ix}; }

bool cubes_touch(const DyadicCube& a, const DyadicCube& b) {
    // Dyadic coordinates are exact doubles, so closed-box intersection is an
    // exact comparison.
    const Box ba = a.box(), bb = b.box();
    return ba.x0 <= bb.x1 && bb.x0 <= ba.x1 && ba.y0 <= bb.y1 && bb.y0 <= ba.y1;
}

// ---------------------------------------------------------------------------
// BoundaryPolyline
// ---------------------------------------------------------------------------

namespace {

double seg_point_dist(cplx a, cplx b, cplx p) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p.real() - a.real()) * d.real() + (p.imag() - a.imag()) * d.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

double cross2(cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); }

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
    const double d1 = cross2(q2 - q1, p1 - q1);
    const double d2 = cross2(q2 - q1, p2 - q1);
    const double d3 = cross2(p2 - p1, q1 - p1);
    const double d4 = cross2(p2 - p1, q2 - p1);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on = [](cplx a, cplx b, cplx c) {
        return cross2(b - a, c - a) == 0.0 && std::min(a.real(), b.real()) <= c.real() &&
               c.real() <= std::max(a.real(), b.real()) &&
               std::min(a.imag(), b.imag()) <= c.imag() &&
               c.imag() <= std::max(a.imag(), b.imag());
    };
    return on(p1, p2, q1) || on(p1, p2, q2) || on(q1, q2, p1) || on(q1, q2, p2);
}

double seg_seg_dist(cplx p1, cplx p2, cplx q1, cplx q2) {
    if (segments_intersect(p1, p2, q1, q2)) return 0.0;
    return std::min(std::min(seg_point_dist(p1, p2, q1), seg_point_dist(p1, p2, q2)),
                    std::min(seg_point_dist(q1, q2, p1), seg_point_dist(q1, q2, p2)));
}

double seg_rect_dist(cplx a, cplx b, const Box& r) {
    if (r.contains(a) || r.contains(b)) return 0.0;
    const cplx c00{r.x0, r.y0}, c10{r.x1, r.y0}, c11{r.x1, r.y1}, c01{r.x0, r.y1};
    double d = seg_seg_dist(a, b, c00, c10);
    d = std::min(d, seg_seg_dist(a, b, c10, c11));
    d = std::min(d, seg_seg_dist(a, b, c11, c01));
    d = std::min(d, seg_seg_dist(a, b, c01, c00));
    return d;
}

}  // namespace

BoundaryPolyline::BoundaryPolyline(std::vector<cplx> pts, bool closed)
    : pts_(std::move(pts)), closed_(closed) {
    if (pts_.size() < 2) throw std::invalid_argument("BoundaryPolyline: need >= 2 points");
    cum_.resize(pts_.size() + (closed_ ? 1 : 0));
    cum_[0] = 0.0;
    spacing_ = 0.0;
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        const double s = std::abs(pts_[i] - pts_[i - 1]);
        cum_[i] = cum_[i - 1] + s;
        spacing_ = std::max(spacing_, s);
    }
    if (closed_) {
        const double s = std::abs(pts_.front() - pts_.back());
        cum_.back() = cum_[pts_.size() - 1] + s;
        spacing_ = std::max(spacing_, s);
    }
    build_index();
}

void BoundaryPolyline::build_index() {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const cplx& p : pts_) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    }
    bx0_ = x0;
    by0_ = y0;
    const double ext = std::max({x1 - x0, y1 - y0, 1e-12});
    const int cells = 256;
    bh_ = ext / cells;
    bnx_ = std::max(1, static_cast<int>(std::floor((x1 - x0) / bh_)) + 1);
    bny_ = std::max(1, static_cast<int>(std::floor((y1 - y0) / bh_)) + 1);
    buckets_.assign(static_cast<std::size_t>(bnx_) * bny_, {});
    for (std::uint32_t i = 0; i < pts_.size(); ++i) {
        int cx = std::clamp(static_cast<int>((pts_[i].real() - bx0_) / bh_), 0, bnx_ - 1);
        int cy = std::clamp(static_cast<int>((pts_[i].imag() - by0_) / bh_), 0, bny_ - 1);
        buckets_[static_cast<std::size_t>(cy) * bnx_ + cx].push_back(i);
    }
}

double BoundaryPolyline::dist_point(cplx z) const {
    // Expanding ring search over the bucket grid for the nearest vertex.
    const int cx = std::clamp(static_cast<int>((z.real() - bx0_) / bh_), 0, bnx_ - 1);
    const int cy = std::clamp(static_cast<int>((z.imag() - by0_) / bh_), 0, bny_ - 1);
    double best = std::numeric_limits<double>::infinity();
    const int max_ring = std::max(bnx_, bny_);
    for (int ring = 0; ring <= max_ring; ++ring) {
        // Once a candidate is found, stop as soon as the ring cannot improve.
        if (std::isfinite(best)) {
            const double ring_min = (ring - 1) * bh_ -
                std::hypot(z.real() - (bx0_ + (cx + 0.5) * bh_),
                           z.imag() - (by0_ + (cy + 0.5) * bh_));
            if (ring_min > best) break;
        }
        for (int dy = -ring; dy <= ring; ++dy) {
            for (int dx = -ring; dx <= ring; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                const int gx = cx + dx, gy = cy + dy;
                if (gx < 0 || gy < 0 || gx >= bnx_ || gy >= bny_) continue;
                for (std::uint32_t i : buckets_[static_cast<std::size_t>(gy) * bnx_ + gx])
                    best = std::min(best, std::abs(z - pts_[i]));
            }
        }
    }
    // Refine over segments whose endpoints lie within best + spacing.
    const double radius = best + spacing_;
    double exact = best;
    const std::size_t nseg = pts_.size() - (closed_ ? 0 : 1);
    for (std::size_t s = 0; s < nseg; ++s) {
        const cplx a = pts_[s];
        const cplx b = pts_[(s + 1) % pts_.size()];
        if (std::abs(z - a) > radius && std::abs(z - b) > radius) continue;
        exact = std::min(exact, seg_point_dist(a, b, z));
    }
    return exact;
}

double BoundaryPolyline::dist_box(const Box& b) const {
    const cplx c{0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)};
    const double half_diag = 0.5 * std::hypot(b.width(), b.height());
    const double d_center = dist_point(c);
    if (d_center <= half_diag) {
        // Boundary close to or inside the cube: do the exact scan with a
        // generous candidate radius.
    }
    const double radius = d_center + half_diag + 2.0 * spacing_;
    double best = std::numeric_limits<double>::infinity();
    const std::size_t nseg = pts_.size() - (closed_ ? 0 : 1);
    for (std::size_t s = 0; s < nseg; ++s) {
        const cplx pa = pts_[s];
        const cplx pb = pts_[(s + 1) % pts_.size()];
        if (std::abs(c - pa) > radius && std::abs(c - pb) > radius) continue;
        best = std::min(best, seg_rect_dist(pa, pb, b));
        if (best == 0.0) return 0.0;
    }
    if (!std::isfinite(best)) best = std::max(0.0, d_center - half_diag);
    return best;
}

cplx BoundaryPolyline::at_arclength(double t) const {
    const double L = length();
    if (closed_) {
        t = std::fmod(t, L);
        if (t < 0) t += L;
    } else {
        t = std::clamp(t, 0.0, L);
    }
    auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
        0, std::distance(cum_.begin(), it) - 1));
    if (i >= cum_.size() - 1) i = cum_.size() - 2;
    const cplx a = pts_[i % pts_.size()];
    const cplx b = pts_[(i + 1) % pts_.size()];
    const double seg = cum_[i + 1] - cum_[i];
    const double u = seg > 0 ? (t - cum_[i]) / seg : 0.0;
    return a + u * (b - a);
}

cplx BoundaryPolyline::tangent_at_arclength(double t) const {
    const double L = length();
    if (closed_) {
        t = std::fmod(t, L);
        if (t < 0) t += L;
    } else {
        t = std::clamp(t, 0.0, L);
    }
    auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
        0, std::distance(cum_.begin(), it) - 1));
    if (i >= cum_.size() - 1) i = cum_.size() - 2;
    const cplx a = pts_[i % pts_.size()];
    const cplx b = pts_[(i + 1) % pts_.size()];
    const cplx d = b - a;
    const double len = std::abs(d);
    return len > 0 ? d / len : cplx{1.0, 0.0};
}

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

bool Domain::contains(cplx z) const {
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GraphDomain>) {
                return z.imag() > d.A(z.real());
            } else if constexpr (std::is_same_v<T, DiskDomain>) {
                return std::abs(z - d.center) < d.radius;
            } else if constexpr (std::is_same_v<T, SquareDomain>) {
                return std::max(std::abs(z.real() - d.center.real()),
                                std::abs(z.imag() - d.center.imag())) < d.half_side;
            } else if constexpr (std::is_same_v<T, HalfPlaneDomain>) {
                return std::cos(d.normal_angle) * z.real() +
                           std::sin(d.normal_angle) * z.imag() > 0.0;
            } else {
                return z.imag() > poly_eval(d.coeffs, z.real());
            }
        },
        v_);
}

bool Domain::bounded() const {
    return std::holds_alternative<DiskDomain>(v_) || std::holds_alternative<SquareDomain>(v_);
}

double Domain::diameter() const {
    if (const auto* d = std::get_if<DiskDomain>(&v_)) return 2.0 * d->radius;
    if (const auto* s = std::get_if<SquareDomain>(&v_))
        return 2.0 * s->half_side * std::sqrt(2.0);
    throw std::invalid_argument("Domain::diameter: domain is unbounded");
}

Box Domain::bounding_box(double margin) const {
    if (const auto* d = std::get_if<DiskDomain>(&v_)) {
        return {d->center.real() - d->radius - margin, d->center.imag() - d->radius - margin,
                d->center.real() + d->radius + margin, d->center.imag() + d->radius + margin};
    }
    if (const auto* s = std::get_if<SquareDomain>(&v_)) {
        return {s->center.real() - s->half_side - margin,
                s->center.imag() - s->half_side - margin,
                s->center.real() + s->half_side + margin,
                s->center.imag() + s->half_side + margin};
    }
    throw std::invalid_argument("Domain::bounding_box: domain is unbounded");
}

BoundaryPolyline Domain::boundary_polyline(int samples, const Box& box) const {
    if (samples < 16) throw std::invalid_argument("boundary_polyline: samples too small");
    if (!box.finite()) throw std::invalid_argument("boundary_polyline: box must be finite");
    return std::visit(
        [&](const auto& d) -> BoundaryPolyline {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, DiskDomain>) {
                std::vector<cplx> pts(samples);
                for (int i = 0; i < samples; ++i) {
                    const double th = 2.0 * M_PI * i / samples;
                    pts[i] = d.center + d.radius * cplx{std::cos(th), std::sin(th)};
                }
                return BoundaryPolyline(std::move(pts), true);
            } else if constexpr (std::is_same_v<T, SquareDomain>) {
                const int per_side = std::max(4, samples / 4);
                std::vector<cplx> pts;
                pts.reserve(static_cast<std::size_t>(per_side) * 4);
                const double h = d.half_side;
                const cplx c = d.center;
                for (int i = 0; i < per_side; ++i) {  // bottom: left -> right
                    const double t = 2.0 * h * i / per_side;
                    pts.emplace_back(c + cplx{-h + t, -h});
                }
                for (int i = 0; i < per_side; ++i) {  // right: bottom -> top
                    const double t = 2.0 * h * i / per_side;
                    pts.emplace_back(c + cplx{h, -h + t});
                }
                for (int i = 0; i < per_side; ++i) {  // top: right -> left
                    const double t = 2.0 * h * i / per_side;
                    pts.emplace_back(c + cplx{h - t, h});
                }
                for (int i = 0; i < per_side; ++i) {  // left: top -> bottom
                    const double t = 2.0 * h * i / per_side;
                    pts.emplace_back(c + cplx{-h, h - t});
                }
                return BoundaryPolyline(std::move(pts), true);
            } else if constexpr (std::is_same_v<T, HalfPlaneDomain>) {
                // Oriented so the domain sits on the left of the traversal.
                const cplx dir = std::exp(cplx{0.0, d.normal_angle - M_PI_2});
                const double reach = 0.5 * std::hypot(box.width(), box.height()) +
                                     std::max(std::abs(box.x0) + std::abs(box.x1),
                                              std::abs(box.y0) + std::abs(box.y1)) +
                                     box.diag();
                std::vector<cplx> pts(samples);
                for (int i = 0; i < samples; ++i) {
                    const double t = -reach + 2.0 * reach * i / (samples - 1);
                    pts[i] = t * dir;
                }
                return BoundaryPolyline(std::move(pts), false);
            } else {
                // Graph-type domains: y = A(x) with increasing x.
                const double pad = box.diag() + 1.0;
                const double xa = box.x0 - pad, xb = box.x1 + pad;
                std::vector<cplx> pts(samples);
                for (int i = 0; i < samples; ++i) {
                    const double x = xa + (xb - xa) * i / (samples - 1);
                    double y;
                    if constexpr (std::is_same_v<T, GraphDomain>)
                        y = d.A(x);
                    else
                        y = poly_eval(d.coeffs, x);
                    pts[i] = {x, y};
                }
                return BoundaryPolyline(std::move(pts), false);
            }
        },
        v_);
}

std::string Domain::describe() const {
    return std::visit(
        [&](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            std::ostringstream os;
            if constexpr (std::is_same_v<T, GraphDomain>) {
                os << "graph(delta=" << d.A.delta() << ", R=" << d.A.R()
                   << ", n=" << d.A.smoothness() << ")";
            } else if constexpr (std::is_same_v<T, DiskDomain>) {
                os << "disk(center=" << d.center << ", r=" << d.radius << ")";
            } else if constexpr (std::is_same_v<T, SquareDomain>) {
                os << "square(center=" << d.center << ", half_side=" << d.half_side << ")";
            } else if constexpr (std::is_same_v<T, HalfPlaneDomain>) {
                os << "halfplane(normal_angle=" << d.normal_angle << ")";
            } else {
                os << "polygraph(degree=" << (d.coeffs.empty() ? 0 : d.coeffs.size() - 1) << ")";
            }
            return os.str();
        },
        v_);
}

// ---------------------------------------------------------------------------
// Symmetric-difference area
// ---------------------------------------------------------------------------

namespace {

double xor_area_pass(const Domain& d1, const Domain& d2, const Box& region, double res) {
    const int nx = std::max(2, static_cast<int>(std::ceil(region.width() / res)));
    const int ny = std::max(2, static_cast<int>(std::ceil(region.height() / res)));
    const double hx = region.width() / nx, hy = region.height() / ny;
    std::int64_t count = 0;
    for (int j = 0; j < ny; ++j) {
        const double y = region.y0 + (j + 0.5) * hy;
        for (int i = 0; i < nx; ++i) {
            const cplx z{region.x0 + (i + 0.5) * hx, y};
            if (d1.contains(z) != d2.contains(z)) ++count;
        }
    }
    return static_cast<double>(count) * hx * hy;
}

}  // namespace

AreaResult symmetric_difference_area(const Domain& d1, const Domain& d2,
                                     const Box& region, double resolution) {
    if (!region.finite())
        throw std::invalid_argument("symmetric_difference_area: region must be finite");
    if (resolution <= 0.0 || resolution > std::min(region.width(), region.height()))
        throw std::invalid_argument("symmetric_difference_area: bad resolution");
    const double coarse = xor_area_pass(d1, d2, region, resolution);
    const double fine = xor_area_pass(d1, d2, region, 0.5 * resolution);
    return {fine, std::abs(fine - coarse)};
}

}  // namespace beurlab
