#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "beurlab/approx.hpp"
#include "beurlab/experiments.hpp"

using namespace beurlab;

namespace {

// Dense least-squares reference: fit a degree-n polynomial to f over J in the
// trapezoid-weighted discrete L^2 (which converges to the continuous
// projection at O(h^2)), then integrate |f - poly| by the trapezoid rule.
struct BruteFit {
    Eigen::VectorXd coeffs;  // about mid(J)
    double l1 = 0.0;
};

BruteFit brute_lsq(const std::function<double(double)>& f, Interval J, int n, int m = 20001) {
    Eigen::MatrixXd V(m, n + 1);
    Eigen::VectorXd y(m);
    const double c = J.mid();
    for (int i = 0; i < m; ++i) {
        const double x = J.a + J.length() * i / (m - 1);
        const double sw = (i == 0 || i == m - 1) ? std::sqrt(0.5) : 1.0;
        double t = 1.0;
        for (int j = 0; j <= n; ++j) {
            V(i, j) = sw * t;
            t *= (x - c);
        }
        y(i) = sw * f(x);
    }
    BruteFit out;
    out.coeffs = V.colPivHouseholderQr().solve(y);
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        const double x = J.a + J.length() * i / (m - 1);
        double pv = 0.0, t = 1.0;
        for (int j = 0; j <= n; ++j) {
            pv += out.coeffs(j) * t;
            t *= (x - c);
        }
        const double w = (i == 0 || i == m - 1) ? 0.5 : 1.0;
        acc += w * std::abs(f(x) - pv);
    }
    out.l1 = acc * J.length() / (m - 1);
    return out;
}

}  // namespace

TEST_CASE("projection of x^2 onto degree-1 polynomials is the constant 1/3") {
    auto f = [](double x) { return x * x; };
    const ApproxFit fit = approx_poly(f, {-1.0, 1.0}, 1);
    CHECK(fit.poly(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(fit.poly(0.7) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(fit.poly(-0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    for (double r : fit.ortho_residuals) CHECK(std::abs(r) < 1e-9);
}

TEST_CASE("orthogonality residuals stay below 1e-9 across the corpus") {
    const auto corpus = function_corpus();
    const Interval I{-0.8, 0.9};
    for (int n = 0; n <= 5; ++n) {
        for (std::size_t i = 0; i < 6; ++i) {
            const ApproxFit fit = approx_poly(corpus[i].second, I, n);
            for (double r : fit.ortho_residuals) CHECK(std::abs(r) < 1e-9);
        }
    }
}

TEST_CASE("beta coefficient of x^2 matches 2/sqrt(3) and the brute-force oracle") {
    auto f = [](double x) { return x * x; };
    const Interval I{-1.0 / 3.0, 1.0 / 3.0};
    const BetaRecord b = beta_coefficient(f, I, 1);
    const double exact = 2.0 / std::sqrt(3.0);
    CHECK(b.beta == doctest::Approx(exact).epsilon(1e-10));

    const Interval J = I.dilate(3.0);
    const BruteFit ref = brute_lsq(f, J, 1);
    const double beta_ref = ref.l1 / (I.length() * I.length());
    CHECK(std::abs(b.beta - beta_ref) < 1e-6);
    // the fit itself matches: constant 1/3, slope 0
    CHECK(ref.coeffs(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(std::abs(ref.coeffs(1)) < 1e-9);
    CHECK(b.fit.poly(0.1) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("beta coefficient matches the brute-force oracle on generic data") {
    const auto corpus = function_corpus();
    const Interval I{0.05, 0.45};
    const Interval J = I.dilate(3.0);
    for (std::size_t i = 0; i < 8; ++i) {
        for (int n = 1; n <= 3; ++n) {
            const BetaRecord b = beta_coefficient(corpus[i].second, I, n);
            const BruteFit ref = brute_lsq(corpus[i].second, J, n);
            const double beta_ref = ref.l1 / (I.length() * I.length());
            CHECK(b.beta == doctest::Approx(beta_ref).epsilon(2e-4));
        }
    }
}

TEST_CASE("projection residual changes sign at least n+1 times") {
    const auto corpus = function_corpus();
    REQUIRE(corpus.size() == 20);
    const Interval I{-1.0, 1.0};
    const int n = 2;
    for (const auto& [name, f] : corpus) {
        const ApproxFit fit = approx_poly(f, I, n);
        double scale = 0.0;
        const int m = 2001;
        std::vector<double> r(m);
        for (int i = 0; i < m; ++i) {
            const double x = I.a + I.length() * i / (m - 1);
            r[i] = f(x) - fit.poly(x);
            scale = std::max(scale, std::abs(r[i]));
        }
        INFO("corpus function: ", name);
        REQUIRE(scale > 0.0);
        int changes = 0;
        double prev = 0.0;
        for (int i = 0; i < m; ++i) {
            if (std::abs(r[i]) < 1e-9 * scale) continue;
            if (prev != 0.0 && (r[i] > 0) != (prev > 0)) ++changes;
            prev = r[i];
        }
        CHECK(changes >= n + 1);
    }
}

TEST_CASE("finite differences annihilate low-degree polynomials") {
    const RealFn f = [](double x) { return 3.0 + 2.0 * x - x * x; };
    CHECK(std::abs(finite_difference(f, 0.3, 0.1, 3)) < 1e-12);
    const RealFn g = [](double x) { return x * x * x; };
    // third difference of x^3 equals 6 h^3 exactly
    CHECK(finite_difference(g, -0.2, 0.05, 3) ==
          doctest::Approx(6.0 * 0.05 * 0.05 * 0.05).epsilon(1e-9));
}

TEST_CASE("besov estimators vanish on polynomials and agree on smooth data") {
    const Interval base{-1.0, 1.0};
    const RealFn poly = [](double x) { return 0.4 - 0.7 * x; };
    const BesovBetaResult bb = besov_betas(poly, 1.25, 2.0, 1, base, 6);
    const BesovDiffResult bd = besov_differences(poly, 1.25, 2.0, 2.0, 2, base, 6);
    CHECK(bb.value < 1e-10);
    CHECK(bd.value < 1e-10);

    const RealFn smooth = [](double x) { return std::sin(3.0 * x); };
    const BesovBetaResult sb = besov_betas(smooth, 1.25, 2.0, 1, base, 7);
    const BesovDiffResult sd = besov_differences(smooth, 1.25, 2.0, 2.0, 2, base, 7);
    CHECK(sb.value > 0.01);
    CHECK(sd.value > 0.01);
    CHECK(sb.value / sd.value > 0.1);
    CHECK(sb.value / sd.value < 10.0);
    CHECK(sb.interval_count > 0);
    CHECK(!sb.levels.empty());
}

TEST_CASE("poly1d evaluation and derivatives") {
    const Poly1D p{0.5, {1.0, 2.0, -3.0}};  // 1 + 2(x-1/2) - 3(x-1/2)^2
    CHECK(p.degree() == 2);
    CHECK(p(0.5) == doctest::Approx(1.0));
    CHECK(p(1.5) == doctest::Approx(1.0 + 2.0 - 3.0));
    const Poly1D dp = p.derivative();
    CHECK(dp(0.5) == doctest::Approx(2.0));
    CHECK(dp(1.0) == doctest::Approx(2.0 - 3.0));
}

TEST_CASE("precondition violations throw") {
    auto f = [](double x) { return x; };
    CHECK_THROWS_AS(approx_poly(f, {0.5, 0.5}, 1), std::invalid_argument);
    CHECK_THROWS_AS(approx_poly(f, {0.0, 1.0}, -1), std::invalid_argument);
    CHECK_THROWS_AS(besov_betas(f, 1.25, 0.5, 1, {-1.0, 1.0}, 4), std::invalid_argument);
}
