#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "beurlab/operators.hpp"

using namespace beurlab;

namespace {
double rel(cplx got, cplx want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}
}  // namespace

TEST_CASE("multi-index helpers") {
    const MultiIndex g{-3, 1};
    CHECK(g.homogeneity() == -2);
    CHECK(g.modulus() == 4);
    CHECK((g.mirrored() == MultiIndex{1, -3}));
    CHECK(((g - MultiIndex{1, 0}) == MultiIndex{-4, 1}));
    const cplx kv = kernel({-1, 0}, {2.0, 0.0});
    CHECK(kv.real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(kv.imag() == doctest::Approx(0.0));
    const cplx v = kernel({-2, 1}, {0.0, 1.0});  // i^-2 * (-i) = i
    CHECK(v.real() == doctest::Approx(0.0));
    CHECK(v.imag() == doctest::Approx(1.0));
}

TEST_CASE("Beurling iterates as kernel indices") {
    auto [g1, c1] = beurling_iterate_index(1);
    CHECK((g1 == MultiIndex{-2, 0}));
    CHECK(c1.real() == doctest::Approx(-1.0 / M_PI));
    CHECK(c1.imag() == doctest::Approx(0.0));
    auto [g2, c2] = beurling_iterate_index(2);
    CHECK((g2 == MultiIndex{-3, 1}));
    CHECK(c2.real() == doctest::Approx(2.0 / M_PI));
    auto [g3, c3] = beurling_iterate_index(3);
    CHECK((g3 == MultiIndex{-4, 2}));
    CHECK(c3.real() == doctest::Approx(-3.0 / M_PI));
}

TEST_CASE("disk closed forms: Cauchy-type kernel (-1,0)") {
    const Domain disk = Domain::disk({0.0, 0.0}, 1.0);
    const cplx zi{0.3, 0.2};
    const EvalResult in_ct = t_char_contour(disk, {-1, 0}, zi);
    CHECK(rel(in_ct.value, M_PI * std::conj(zi)) < 1e-9);
    const EvalResult in_pv = t_char_pv(disk, {-1, 0}, zi);
    CHECK(rel(in_pv.value, M_PI * std::conj(zi)) < 1e-6);

    const cplx zo{2.0, 0.0};
    const EvalResult out_ct = t_char_contour(disk, {-1, 0}, zo);
    CHECK(rel(out_ct.value, M_PI / zo) < 1e-9);
    const EvalResult out_pv = t_char_pv(disk, {-1, 0}, zo);
    CHECK(rel(out_pv.value, M_PI / zo) < 1e-6);
}

TEST_CASE("disk closed forms: Beurling kernel (-2,0)") {
    const Domain disk = Domain::disk({0.0, 0.0}, 1.0);
    for (cplx zi : {cplx{0.1, 0.0}, cplx{-0.2, 0.35}, cplx{0.4, -0.1}}) {
        CHECK(std::abs(t_char_contour(disk, {-2, 0}, zi).value) < 1e-9);
        CHECK(std::abs(t_char_pv(disk, {-2, 0}, zi).value) < 1e-6);
    }
    for (cplx zo : {cplx{2.0, 0.0}, cplx{-1.1, 1.4}}) {
        const cplx want = M_PI / (zo * zo);
        CHECK(rel(t_char_contour(disk, {-2, 0}, zo).value, want) < 1e-9);
        CHECK(rel(t_char_pv(disk, {-2, 0}, zo).value, want) < 1e-6);
    }
    // scaling: radius r disk centered at c
    const Domain d2 = Domain::disk({0.5, -0.25}, 0.6);
    const cplx z{2.0, 1.0};
    const cplx u = z - cplx{0.5, -0.25};
    CHECK(rel(t_char_contour(d2, {-2, 0}, z).value, M_PI * 0.36 / (u * u)) < 1e-9);
}

TEST_CASE("half-plane staircase value of the Beurling kernel") {
    const Domain hp = Domain::half_plane();
    // above the boundary: pi/2 (so B chi_H = -1/2 there)
    const EvalResult above = t_char_pv(hp, {-2, 0}, {0.0, 0.7});
    CHECK(std::abs(above.value - cplx(M_PI / 2.0, 0.0)) < 1e-6);
    // below: -pi/2, by chi_H + chi_L = chi_C and T chi_C = 0
    const EvalResult below = t_char_pv(hp, {-2, 0}, {0.3, -0.4});
    CHECK(std::abs(below.value + cplx(M_PI / 2.0, 0.0)) < 1e-6);
}

TEST_CASE("half-plane vanishing at homogeneity -3") {
    const Domain hp = Domain::half_plane();
    const EvalResult r = t_char_contour(hp, {-3, 0}, {0.0, 1.0});
    CHECK(std::abs(r.value) < 1e-6);
    const EvalResult r2 = t_char_contour(hp, {-3, 0}, {0.8, 0.3});
    CHECK(std::abs(r2.value) < 1e-6);
}

TEST_CASE("contour route refuses truncation-sensitive unbounded cases") {
    const Domain hp = Domain::half_plane();
    CHECK_THROWS_AS(t_char_contour(hp, {-2, 0}, cplx{0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(t_char_contour(hp, {-1, 0}, cplx{0.0, 1.0}), std::invalid_argument);
    // PV refuses only homogeneity >= -1 on unbounded domains
    CHECK_THROWS_AS(t_char_pv(hp, {-1, 0}, cplx{0.0, 1.0}), std::invalid_argument);
    CHECK_NOTHROW(t_char_pv(hp, {-2, 0}, cplx{0.0, 1.0}));
}

TEST_CASE("derivative ladder case split") {
    // d/dzbar of the Cauchy kernel: identity multiple
    const LadderResult ident = derivative_ladder({-1, 0}, {0, 1});
    CHECK(ident.kind == LadderCase::identity);
    // d/dzbar of the Beurling kernel: zero (holomorphy)
    const LadderResult zero = derivative_ladder({-2, 0}, {0, 1});
    CHECK(zero.kind == LadderCase::zero);
    // d/dz reductions
    const LadderResult r1 = derivative_ladder({-2, 0}, {1, 0});
    CHECK(r1.kind == LadderCase::reduce);
    CHECK(r1.constant == doctest::Approx(-2.0));
    CHECK((r1.reduced == MultiIndex{-3, 0}));
    const LadderResult r2 = derivative_ladder({-3, 1}, {1, 0});
    CHECK(r2.kind == LadderCase::reduce);
    CHECK(r2.constant == doctest::Approx(-3.0));
    CHECK((r2.reduced == MultiIndex{-4, 1}));
    const LadderResult r3 = derivative_ladder({-3, 1}, {0, 1});
    CHECK(r3.kind == LadderCase::reduce);
    CHECK(r3.constant == doctest::Approx(1.0));
    CHECK((r3.reduced == MultiIndex{-3, 0}));
    // iterated reduction (-2,0) -> (n,0): constant (-1)^n (n+1)!
    const LadderResult rr = derivative_ladder({-2, 0}, {2, 0});
    CHECK(rr.kind == LadderCase::reduce);
    CHECK(rr.constant == doctest::Approx(6.0));
    CHECK((rr.reduced == MultiIndex{-4, 0}));
}

TEST_CASE("finite differences of contour values match the ladder on the square") {
    const Domain sq = Domain::square({0.0, 0.0}, 1.0);
    const double h = 1e-3;
    auto u = [&](MultiIndex g, cplx z) { return t_char_contour(sq, g, z).value; };
    auto dz = [&](MultiIndex g, cplx z) {
        const cplx dx = (u(g, z + cplx(h, 0)) - u(g, z - cplx(h, 0))) / (2.0 * h);
        const cplx dy = (u(g, z + cplx(0, h)) - u(g, z - cplx(0, h))) / (2.0 * h);
        return 0.5 * (dx - cplx(0, 1) * dy);
    };
    auto dzbar = [&](MultiIndex g, cplx z) {
        const cplx dx = (u(g, z + cplx(h, 0)) - u(g, z - cplx(h, 0))) / (2.0 * h);
        const cplx dy = (u(g, z + cplx(0, h)) - u(g, z - cplx(0, h))) / (2.0 * h);
        return 0.5 * (dx + cplx(0, 1) * dy);
    };
    const cplx z{0.25, -0.3};
    const LadderResult r1 = derivative_ladder({-2, 0}, {1, 0});
    CHECK(rel(dz({-2, 0}, z), r1.constant * u(r1.reduced, z)) < 1e-3);
    const LadderResult r2 = derivative_ladder({-3, 1}, {1, 0});
    CHECK(rel(dz({-3, 1}, z), r2.constant * u(r2.reduced, z)) < 1e-3);
    const LadderResult r3 = derivative_ladder({-3, 1}, {0, 1});
    CHECK(rel(dzbar({-3, 1}, z), r3.constant * u(r3.reduced, z)) < 1e-3);
    // holomorphy of the Beurling field inside the domain
    CHECK(std::abs(dzbar({-2, 0}, z)) < 1e-4);
}

TEST_CASE("disk interior nulls every Beurling iterate kernel") {
    const Domain disk = Domain::disk({0.0, 0.0}, 1.0);
    for (cplx z : {cplx{0.3, 0.1}, cplx{-0.2, -0.4}}) {
        CHECK(std::abs(t_char_contour(disk, {-2, 0}, z).value) < 1e-8);
        CHECK(std::abs(t_char_contour(disk, {-3, 1}, z).value) < 1e-8);
        CHECK(std::abs(t_char_contour(disk, {-4, 2}, z).value) < 1e-8);
    }
}

TEST_CASE("pv and contour agree on a graph-like bounded domain") {
    const Domain sq = Domain::square({0.0, 0.0}, 1.0);
    for (cplx z : {cplx{0.2, 0.3}, cplx{-0.6, 0.1}}) {
        for (MultiIndex g : {MultiIndex{-2, 0}, MultiIndex{-3, 1}}) {
            const EvalResult pv = t_char_pv(sq, g, z);
            const EvalResult ct = t_char_contour(sq, g, z);
            CHECK(std::abs(pv.value - ct.value) < 1e-6 * std::max(1.0, std::abs(ct.value)));
        }
    }
}

TEST_CASE("smooth-data PV transform: radial symmetry cancels at the center") {
    auto f = [](cplx w) -> cplx {
        const double r2 = std::norm(w);
        return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    };
    const EvalResult r = t_smooth_pv(f, Box{-1.1, -1.1, 1.1, 1.1}, {-2, 0}, {0.0, 0.0});
    CHECK(std::abs(r.value) < 1e-4);
}

TEST_CASE("flat polynomial probe: exact vanishing at degree one") {
    const Poly1D P{0.0, {0.01, 0.05}};
    const FlatPolyResult r = flat_poly_bound_probe(P, 2, {0.05, 0.15}, 0.25, 0.5, 0.5, 1.0);
    CHECK(std::abs(r.value) < 1e-6);
    CHECK(r.j1 == 5);
    CHECK(r.degree == 1);
    // coefficient caps enforced at degree >= 2
    const Poly1D bad{0.0, {0.0, 0.0, 10.0}};
    CHECK_THROWS_AS(flat_poly_bound_probe(bad, 1, {0.0, 0.1}, 0.25, 0.5, 0.5, 1.0),
                    std::invalid_argument);
    // z outside the flat square is rejected
    CHECK_THROWS_AS(flat_poly_bound_probe(P, 1, {0.5, 0.5}, 0.25, 0.5, 0.5, 1.0),
                    std::invalid_argument);
}

TEST_CASE("young-type convolution bound holds with the sharp constant") {
    const Domain disk = Domain::disk({0.0, 0.0}, 1.0);
    GridFunction f(Box{-1.5, -1.5, 1.5, 1.5}, 128);
    f.fill([](cplx z) {
        const double r2 = std::norm(z);
        return cplx(r2 < 1.0 ? (1.0 - r2) * (1.0 - r2) : 0.0, 0.0);
    });
    const YoungReport yr = young_bound_check(disk, {-1, 0}, f, 2.0);
    CHECK(yr.holds_sharp);
    CHECK(yr.lhs > 0.0);
    CHECK(yr.lhs <= yr.bound_sharp * (1.0 + 1e-9));
}
