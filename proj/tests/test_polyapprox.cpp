#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaussq/errors.hpp"
#include "gaussq/polyapprox.hpp"

using namespace gaussq;

namespace {

// Evaluates on `points` equally spaced nodes, both ends included.
template <class F>
double grid_max(F&& f, double lo, double hi, int points = 10000) {
    double m = 0.0;
    for (int i = 0; i < points; ++i) m = std::max(m, std::abs(f(lo + (hi - lo) * i / (points - 1))));
    return m;
}

}  // namespace

TEST_CASE("linear amplification polynomial") {
    for (double G : {0.05, 0.1, 0.25, 0.5})
        for (double eps : {1e-2, 1e-3}) {
            CAPTURE(G);
            CAPTURE(eps);
            const PolySpec P = p_lin(G, eps);
            CHECK(grid_max([&](double x) { return P(x); }, -1.0, 1.0) <= 1.0 + 1e-12);
            // Relative accuracy on [-G, G]; x = 0 itself is exact by oddness.
            const double worst = grid_max(
                [&](double x) {
                    if (x == 0.0) return 0.0;
                    return (P(x) - x / (2 * G)) / (eps * std::abs(x) / (2 * G));
                },
                -G, G);
            CHECK(worst <= 1.0);
            CHECK(P.degree % 2 == 1);
            CHECK(P(0.37 * G) == doctest::Approx(-P(-0.37 * G)));
        }
    CHECK_THROWS_AS(p_lin(0.6, 0.01), InvalidInput);
    CHECK_THROWS_AS(p_lin(0.2, 0.0), InvalidInput);
}

TEST_CASE("Taylor polynomial of a^x") {
    for (double a : {0.05, 0.5, 2.0, 30.0})
        for (double eps : {1e-3, 1e-8}) {
            const PolySpec P = taylor_exp_scaled(a, eps);
            const int want =
                std::max(static_cast<int>(std::ceil(std::exp(2.0) * std::abs(std::log(a)))),
                         static_cast<int>(std::ceil(std::log(1.0 / eps))));
            CHECK(taylor_degree(a, eps) == want);
            CHECK(P.degree == want);
            CHECK(grid_max([&](double x) { return P(x) - std::pow(a, x); }, -1.0, 1.0) <= eps);
            CHECK_FALSE(P.meta.precision_limited);
        }
    CHECK_THROWS_AS(taylor_exp_scaled(-1.0, 0.1), InvalidInput);
}

TEST_CASE("composition and scaling carry their error budgets") {
    const PolySpec inner = p_lin(0.25, 1e-3);
    const PolySpec outer = taylor_exp_scaled(std::exp(1.0), 1e-6);
    const PolySpec R = compose_poly(outer, inner);
    CHECK(R.degree == outer.degree * inner.degree);
    const double err = grid_max([&](double x) { return R(x) - std::exp(x / 0.5); }, -0.25, 0.25);
    CHECK(err <= R.meta.approx_error);
    CHECK(reverify(R));
    const PolySpec S = scale_poly(outer, -0.5);
    CHECK(S(0.3) == doctest::Approx(-0.5 * outer(0.3)));
    CHECK(S.meta.sup_bound == doctest::Approx(0.5 * outer.meta.sup_bound));
    CHECK_THROWS_AS(compose_poly(outer, scale_poly(outer, 1.0)), DomainError);
}

TEST_CASE("monomial and Chebyshev evaluation agree with their definitions") {
    PolySpec m;
    m.coeffs = {1.0, -2.0, 0.5};
    m.degree = 2;
    CHECK(m(3.0) == doctest::Approx(1.0 - 6.0 + 4.5));
    CHECK(m.derivative(3.0) == doctest::Approx(-2.0 + 3.0));
    PolySpec c;
    c.basis = Basis::Chebyshev;
    c.coeffs = {0.0, 0.0, 0.0, 1.0};
    c.degree = 3;
    for (double x : {-0.9, -0.2, 0.4, 1.0}) {
        CHECK(c(x) == doctest::Approx(std::cos(3.0 * std::acos(x))));
        CHECK(c.derivative(x) == doctest::Approx(12.0 * x * x - 3.0));
    }
}

TEST_CASE("exponential of the normalised path") {
    struct Cell { double c, Xi, kappa, eps; };
    const Cell cells[] = {{0.5, 0.5, 1.0, 1e-3},  {0.5, 0.5, 3.0, 1e-6}, {-0.5, 1.0, 2.0, 1e-4},
                          {-0.5, 1.0, 5.0, 1e-3}, {1.0, 0.3, 0.6, 1e-5}, {1.0, 0.3, 2.4, 1e-3},
                          {-1.0, 0.7, 1.4, 1e-4}, {1.9, 0.4, 1.6, 1e-3}};
    for (const auto& cell : cells) {
        CAPTURE(cell.c);
        CAPTURE(cell.kappa);
        const PolySpec P = build_Hk(cell.kappa, cell.c, cell.Xi, cell.eps);
        const double half = cell.Xi / cell.kappa;
        const double err =
            grid_max([&](double x) { return P(x) - std::exp(cell.c * cell.kappa * x); }, -half, half);
        CHECK(err <= cell.eps);
        const double gamma = grid_max([&](double x) { return P(x); }, -1.0, 1.0);
        CHECK(gamma <= 2.0 * std::exp(2.0 * std::abs(cell.c) * cell.Xi));
        CHECK_FALSE(P.meta.precision_limited);
    }
    CHECK_THROWS_AS(build_Hk(1.0, 0.5, 1.0, 1e-3), PreconditionError);
    CHECK_THROWS_AS(build_Hk(4.0, 0.0, 1.0, 1e-3), InvalidInput);
}

TEST_CASE("small-norm variant") {
    const double c = 1.9, Xi = 2.0, kappa = 1.5, eps = 1e-6;
    const PolySpec P = build_Hk_small_norm(kappa, c, Xi, eps);
    const double err = grid_max([&](double x) { return P(x) - std::exp(c * kappa * x); }, -1.0, 1.0);
    CHECK(err <= eps);
    CHECK(grid_max([&](double x) { return P(x); }, -1.0, 1.0) <= 2.0 * std::exp(2.0 * c * Xi));
    CHECK_THROWS_AS(build_Hk_small_norm(5.0, c, Xi, eps), PreconditionError);
}

TEST_CASE("unattainable accuracy is reported, not hidden") {
    const PolySpec P = taylor_exp_scaled(std::exp(30.0), 1e-20);
    CHECK(P.meta.precision_limited);
    CHECK(P.meta.approx_error > 1e-20);
    CHECK(reverify(P));
}
