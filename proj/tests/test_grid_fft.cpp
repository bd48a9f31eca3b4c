#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "beurlab/fft_ops.hpp"
#include "beurlab/grid.hpp"

using namespace beurlab;

namespace {
GridFunction mollified_disk_grid(Box box, int n, double radius, double width) {
    GridFunction g(box, n);
    g.fill([&](cplx z) {
        const double r = std::abs(z);
        if (r <= radius - width) return cplx(1.0, 0.0);
        if (r >= radius) return cplx(0.0, 0.0);
        const double t = (radius - r) / width;  // 0 at the outer edge, 1 inside
        return cplx(t * t * (3.0 - 2.0 * t), 0.0);
    });
    return g;
}
}  // namespace

TEST_CASE("grid function sampling and norms") {
    const Box box{-1.0, -1.0, 1.0, 1.0};
    GridFunction g(box, 64);
    CHECK(g.size() == 64);
    CHECK(g.spacing() == doctest::Approx(2.0 / 64));
    g.fill([](cplx z) { return cplx(z.real(), 0.0); });
    // cell centers: first point is offset half a cell
    CHECK(g.point(0, 0).real() == doctest::Approx(-1.0 + 0.5 * g.spacing()));
    CHECK(g.sample_bilinear({0.25, 0.0}).real() == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(g.sample_nearest({0.25, 0.0}).real() == doctest::Approx(0.25).epsilon(0.05));

    GridFunction c(box, 32);
    c.fill([](cplx) { return cplx(2.0, 0.0); });
    // L2 of the constant 2 over a 2x2 box: 2 * sqrt(4) = 4
    CHECK(lp_norm(c, 2.0) == doctest::Approx(4.0).epsilon(1e-12));
    const GridMask half = GridMask::from_predicate(box, 32, [](cplx z) { return z.real() > 0.0; });
    CHECK(half.area() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(lp_norm(c, half, 2.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("conv operator validates the grid size") {
    CHECK_THROWS_AS(ConvOperator(Box{-1, -1, 1, 1}, 100, ConvOperator::Kind::beurling_free),
                    std::invalid_argument);
    CHECK_NOTHROW(ConvOperator(Box{-1, -1, 1, 1}, 128, ConvOperator::Kind::beurling_free));
}

TEST_CASE("multiplier Beurling transform is an L2 isometry on zero-mean data") {
    const Box box{-2.0, -2.0, 2.0, 2.0};
    GridFunction f(box, 128);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double mean = 0.0;
    for (int j = 0; j < 128; ++j)
        for (int i = 0; i < 128; ++i) {
            f.at(i, j) = cplx(uni(rng), uni(rng));
            mean += f.at(i, j).real();
        }
    // remove the DC component, which the multiplier route zeroes out
    const cplx shift(mean / (128.0 * 128.0), 0.0);
    for (int j = 0; j < 128; ++j)
        for (int i = 0; i < 128; ++i) f.at(i, j) -= shift;
    double imean = 0.0;
    for (int j = 0; j < 128; ++j)
        for (int i = 0; i < 128; ++i) imean += f.at(i, j).imag();
    const cplx ishift(0.0, imean / (128.0 * 128.0));
    for (int j = 0; j < 128; ++j)
        for (int i = 0; i < 128; ++i) f.at(i, j) -= ishift;

    const GridFunction bf = fft_beurling(f);
    CHECK(lp_norm(bf, 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-10));
}

TEST_CASE("free-space Beurling transform reproduces the disk closed form") {
    const Box box{-2.0, -2.0, 2.0, 2.0};
    const int n = 256;
    const GridFunction chi = mollified_disk_grid(box, n, 1.0, 0.02);
    const GridFunction b = fft_beurling_free(chi);
    // interior null
    for (cplx z : {cplx{0.0, 0.0}, cplx{0.3, 0.2}, cplx{-0.4, -0.1}})
        CHECK(std::abs(b.sample_bilinear(z)) < 5e-3);
    // exterior tail -1/z^2
    for (cplx z : {cplx{1.5, 0.0}, cplx{-1.2, 0.9}, cplx{0.3, -1.6}}) {
        const cplx want = -1.0 / (z * z);
        CHECK(std::abs(b.sample_bilinear(z) - want) < 0.03 * std::abs(want) + 5e-3);
    }
}

TEST_CASE("free-space Cauchy transform reproduces the disk closed form") {
    const Box box{-2.0, -2.0, 2.0, 2.0};
    const int n = 256;
    const GridFunction chi = mollified_disk_grid(box, n, 1.0, 0.02);
    const GridFunction cf = fft_cauchy(chi);
    // C chi_D = zbar inside, 1/z outside
    for (cplx z : {cplx{0.3, 0.2}, cplx{-0.4, -0.1}})
        CHECK(std::abs(cf.sample_bilinear(z) - std::conj(z)) < 2e-2);
    for (cplx z : {cplx{1.5, 0.0}, cplx{-1.2, 0.9}})
        CHECK(std::abs(cf.sample_bilinear(z) - 1.0 / z) < 2e-2);
}

TEST_CASE("outer mass fraction detects support near the box edge") {
    const Box box{-2.0, -2.0, 2.0, 2.0};
    const GridFunction centered = mollified_disk_grid(box, 128, 0.5, 0.02);
    CHECK(outer_mass_fraction(centered) < 1e-12);
    GridFunction edgy(box, 128);
    edgy.fill([](cplx z) { return cplx(std::abs(z - cplx(1.9, 1.9)) < 0.3 ? 1.0 : 0.0, 0.0); });
    CHECK(outer_mass_fraction(edgy) > 0.1);
}

TEST_CASE("grid arithmetic") {
    const Box box{0.0, 0.0, 1.0, 1.0};
    GridFunction a(box, 16), b(box, 16);
    a.fill([](cplx z) { return cplx(z.real(), 0.0); });
    b.fill([](cplx z) { return cplx(z.real(), 1.0); });
    const GridFunction d = a - b;
    CHECK(std::abs(d.at(3, 7) - cplx(0.0, -1.0)) < 1e-15);
}
