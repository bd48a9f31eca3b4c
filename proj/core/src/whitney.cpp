#include "beurlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace beurlab {

namespace {

double clipped_area(const Box& cube, const Box& box) {
    const double w = std::max(0.0, std::min(cube.x1, box.x1) - std::max(cube.x0, box.x0));
    const double h = std::max(0.0, std::min(cube.y1, box.y1) - std::max(cube.y0, box.y0));
    return w * h;
}

double domain_area_in_box(const Domain& domain, const Box& box, double res) {
    const int nx = std::max(2, static_cast<int>(std::ceil(box.width() / res)));
    const int ny = std::max(2, static_cast<int>(std::ceil(box.height() / res)));
    const double hx = box.width() / nx, hy = box.height() / ny;
    std::int64_t count = 0;
    for (int j = 0; j < ny; ++j) {
        const double y = box.y0 + (j + 0.5) * hy;
        for (int i = 0; i < nx; ++i) {
            if (domain.contains({box.x0 + (i + 0.5) * hx, y})) ++count;
        }
    }
    return static_cast<double>(count) * hx * hy;
}

struct PairHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const {
        return std::hash<std::int64_t>()(p.first * 1000003 + p.second);
    }
};

}  // namespace

WhitneyCovering build_whitney(const Domain& domain, double cw, double min_scale,
                              const Box& box, int boundary_samples) {
    if (cw < 1.0) throw std::invalid_argument("build_whitney: cw must be >= 1");
    if (min_scale <= 0.0) throw std::invalid_argument("build_whitney: min_scale must be > 0");
    if (!box.finite()) throw std::invalid_argument("build_whitney: box must be finite");

    const BoundaryPolyline boundary = domain.boundary_polyline(boundary_samples, box);

    // Coarsest level: make the top side large enough that any cube passing the
    // lower distance bound automatically lies under the 4x upper bound.
    const cplx box_center{0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1)};
    const double max_dist = boundary.dist_point(box_center) + 0.5 * box.diag();
    double side_top = 1.0;
    int level_top = 0;
    while (side_top * cw < max_dist) {
        side_top *= 2.0;
        --level_top;
    }
    while (side_top * cw >= 2.0 * max_dist && side_top > 2.0 * min_scale) {
        side_top *= 0.5;
        ++level_top;
    }

    WhitneyCovering cov;
    cov.cw = cw;
    cov.min_scale = min_scale;
    cov.box = box;

    const auto ifloor = [](double v) {
        return static_cast<std::int64_t>(std::floor(v));
    };

    std::vector<DyadicCube> stack;
    for (std::int64_t iy = ifloor(box.y0 / side_top); iy <= ifloor(box.y1 / side_top); ++iy)
        for (std::int64_t ix = ifloor(box.x0 / side_top); ix <= ifloor(box.x1 / side_top); ++ix)
            stack.push_back({level_top, ix, iy});

    while (!stack.empty()) {
        const DyadicCube q = stack.back();
        stack.pop_back();
        const double side = q.side();
        const Box cb = q.box();
        const double d = boundary.dist_box(cb);
        if (d >= cw * side) {
            // No boundary near the cube: it is uniformly inside or outside.
            if (domain.contains(q.center())) cov.cubes.push_back({q, d});
            continue;
        }
        if (0.5 * side < min_scale) continue;  // truncated collar
        for (int cy = 0; cy < 2; ++cy)
            for (int cx = 0; cx < 2; ++cx) stack.push_back(q.child(cx, cy));
    }

    std::sort(cov.cubes.begin(), cov.cubes.end(), [](const WhitneyCube& a, const WhitneyCube& b) {
        if (a.cube.level != b.cube.level) return a.cube.level < b.cube.level;
        if (a.cube.ix != b.cube.ix) return a.cube.ix < b.cube.ix;
        return a.cube.iy < b.cube.iy;
    });

    for (const WhitneyCube& wq : cov.cubes) cov.covered_area += clipped_area(wq.cube.box(), box);
    const double res = std::max(0.5 * min_scale, box.diag() / 4096.0);
    cov.domain_area = domain_area_in_box(domain, box, res);
    cov.truncated_collar_area = std::max(0.0, cov.domain_area - cov.covered_area);
    return cov;
}

WhitneyCheckReport check_whitney(const Domain& domain, const WhitneyCovering& cov,
                                 int boundary_samples) {
    WhitneyCheckReport rep;
    rep.cube_count = cov.cubes.size();
    if (cov.cubes.empty()) return rep;

    const BoundaryPolyline boundary = domain.boundary_polyline(boundary_samples, cov.box);
    const double tol = 2.0 * boundary.spacing();

    rep.min_ratio = std::numeric_limits<double>::infinity();
    rep.max_ratio = 0.0;
    for (const WhitneyCube& wq : cov.cubes) {
        const double side = wq.cube.side();
        const double d = boundary.dist_box(wq.cube.box());
        const double ratio = d / (cov.cw * side);
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (d + tol < cov.cw * side || d - tol > 4.0 * cov.cw * side) ++rep.distance_failures;
    }

    // Spatial hash on the coarsest-cube grid for neighbor queries.
    double s_max = 0.0;
    for (const WhitneyCube& wq : cov.cubes) s_max = std::max(s_max, wq.cube.side());
    std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>, PairHash>
        grid;
    const auto cell_of = [&](cplx z) {
        return std::make_pair(static_cast<std::int64_t>(std::floor(z.real() / s_max)),
                              static_cast<std::int64_t>(std::floor(z.imag() / s_max)));
    };
    for (std::size_t i = 0; i < cov.cubes.size(); ++i) {
        const Box b = cov.cubes[i].cube.box();
        for (std::int64_t gy = static_cast<std::int64_t>(std::floor(b.y0 / s_max));
             gy <= static_cast<std::int64_t>(std::floor(b.y1 / s_max)); ++gy)
            for (std::int64_t gx = static_cast<std::int64_t>(std::floor(b.x0 / s_max));
                 gx <= static_cast<std::int64_t>(std::floor(b.x1 / s_max)); ++gx)
                grid[{gx, gy}].push_back(i);
    }
    (void)cell_of;

    for (auto& [cell, idxs] : grid) {
        for (std::size_t a = 0; a < idxs.size(); ++a) {
            for (std::size_t b = a + 1; b < idxs.size(); ++b) {
                const DyadicCube& qa = cov.cubes[idxs[a]].cube;
                const DyadicCube& qb = cov.cubes[idxs[b]].cube;
                if (!cubes_touch(qa, qb)) continue;
                // Count each touching pair once (in its lexicographically
                // first shared cell) to keep the tally deterministic.
                const Box ba = qa.box(), bb = qb.box();
                const double ox = std::max(ba.x0, bb.x0), oy = std::max(ba.y0, bb.y0);
                const auto first_cell =
                    std::make_pair(static_cast<std::int64_t>(std::floor(ox / s_max)),
                                   static_cast<std::int64_t>(std::floor(oy / s_max)));
                if (first_cell != cell) continue;
                ++rep.neighbor_pairs;
                const int dl = std::abs(qa.level - qb.level);
                if (dl > 1) ++rep.neighbor_failures;
                // Interior overlap means the covering is not disjoint.
                if (ba.x0 < bb.x1 && bb.x0 < ba.x1 && ba.y0 < bb.y1 && bb.y0 < ba.y1 &&
                    !(ba.x1 == bb.x0 || bb.x1 == ba.x0 || ba.y1 == bb.y0 || bb.y1 == ba.y0))
                    rep.disjoint = false;
            }
        }
    }

    // Superposition of the 20Q dilates, witnessed at cube centers.
    std::unordered_map<int, std::unordered_map<std::pair<std::int64_t, std::int64_t>,
                                               std::vector<std::size_t>, PairHash>>
        by_level;
    for (std::size_t i = 0; i < cov.cubes.size(); ++i) {
        const DyadicCube& q = cov.cubes[i].cube;
        by_level[q.level][{q.ix, q.iy}].push_back(i);
    }
    rep.max_overlap_20q = 0;
    for (const WhitneyCube& wq : cov.cubes) {
        const cplx z = wq.cube.center();
        int count = 0;
        for (const auto& [lvl, cells] : by_level) {
            const double side = std::ldexp(1.0, -lvl);
            // z lies in 20Q iff the center of Q is within 10*side in sup norm.
            const std::int64_t jx = static_cast<std::int64_t>(std::floor(z.real() / side));
            const std::int64_t jy = static_cast<std::int64_t>(std::floor(z.imag() / side));
            for (std::int64_t gy = jy - 10; gy <= jy + 10; ++gy) {
                for (std::int64_t gx = jx - 10; gx <= jx + 10; ++gx) {
                    auto it = cells.find({gx, gy});
                    if (it == cells.end()) continue;
                    for (std::size_t idx : it->second) {
                        const cplx c = cov.cubes[idx].cube.center();
                        const double r = 10.0 * side;
                        if (std::abs(z.real() - c.real()) <= r &&
                            std::abs(z.imag() - c.imag()) <= r)
                            ++count;
                    }
                }
            }
        }
        rep.max_overlap_20q = std::max(rep.max_overlap_20q, count);
    }

    rep.coverage_fraction = cov.domain_area > 0 ? cov.covered_area / cov.domain_area : 0.0;
    return rep;
}

}  // namespace beurlab
