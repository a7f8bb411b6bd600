#include <doctest.h>

#include <cmath>
#include <random>

#include "isolab/dist.hpp"
#include "isolab/random_rho.hpp"

using namespace isolab;

namespace {
constexpr double kPi = 3.141592653589793;
const RhoFunction kZero13 = RhoFunction::constant(0.0, 1.0, 3.0);
}

TEST_SUITE_BEGIN("dist");

TEST_CASE("logarithmic measure of interval unions") {
    CHECK(std::fabs(mu_measure({{1.0, 3.0}}) - std::log(3.0)) < 1e-15);
    CHECK(std::fabs(mu_measure({{1.0, 2.0}, {4.0, 8.0}}) - 2.0 * std::log(2.0)) < 1e-15);
    CHECK(mu_measure({}) == 0.0);
    CHECK_THROWS_AS(mu_measure({{0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(mu_measure({{2.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("distribution of the decreasing closed-form solution") {
    // evaluated against the closed-form distribution; at t = 0 it equals
    // log(sqrt(ab)/a) = log(3)/2 for [1, 3]
    BvpSolution sol = solve_linear(kZero13, SignPair{1, -1});
    DistFunction dist(sol.u, {0.0, 0.5, 0.9});
    CHECK(std::fabs(dist.value(0) - 0.5 * std::log(3.0)) < 1e-10);
    for (size_t i = 0; i < dist.size(); ++i)
        CHECK(std::fabs(dist.value(i) - u0_distribution(1.0, 3.0, dist.thresholds()[i]))
              < 1e-10);
}

TEST_CASE("distribution of the flat riccati solution") {
    RiccatiSolution sol = solve_riccati(kZero13);
    const double lam = w0_sup(1.0, 3.0);
    CHECK(std::fabs(lam - 2.0 / std::sqrt(3.0)) < 1e-15);
    DistFunction dist(sol.w, {1.0, 1.05, 1.1});
    CHECK(std::fabs(dist.value(0) - std::log(3.0)) < 1e-9);
    CHECK(std::fabs(dist.value(1) - z0_value(1.0, 3.0, 1.05)) < 1e-9);
    CHECK(std::fabs(dist.value(2) - z0_value(1.0, 3.0, 1.1)) < 1e-9);
}

TEST_CASE("oscillation beyond the scan grid is reported") {
    PanelFunction wild;
    wild.lo = 1.0;
    wild.hi = 3.0;
    wild.panels = {1.0, 3.0};
    wild.eval = [](double x) { return std::sin(20000.0 * x); };
    CHECK_THROWS_AS(DistFunction(wild, {0.5}), std::runtime_error);
}

TEST_CASE("distribution function is nonincreasing") {
    std::mt19937_64 rng(61);
    auto [a, b] = random_interval(rng);
    const RhoFunction rho = random_step_rho(rng, a, b, 6, 0.4, 0.0);
    RiccatiSolution sol = solve_riccati(rho);
    std::vector<double> grid;
    for (int i = 0; i < 64; ++i)
        grid.push_back(1.0 + (sol.sup_w - 1.0) * (i + 0.5) / 64.0);
    DistFunction dist(sol.w, grid);
    for (size_t i = 1; i < dist.size(); ++i)
        CHECK(dist.value(i) <= dist.value(i - 1) + 1e-14);
}

TEST_CASE("total measure anchors at the unique zero") {
    std::mt19937_64 rng(67);
    auto [a, b] = random_interval(rng);
    const RhoFunction rho = random_step_rho(rng, a, b, 5, 0.3, 0.0);
    BvpSolution sol = solve_linear(rho, SignPair{1, -1});
    REQUIRE(sol.zero.has_value());
    DistFunction dist(sol.u, {1e-9});
    CHECK(std::fabs(dist.value(0) - std::log(*sol.zero / a)) < 1e-6);
}

TEST_CASE("flat solution boundary-slope identity") {
    // 1/|a w0'(a)| + 1/|b w0'(b)| = 2 (a+b)/(b-a)
    std::mt19937_64 rng(71);
    for (int i = 0; i < 5; ++i) {
        auto [a, b] = random_interval(rng);
        RiccatiSolution sol = solve_riccati(RhoFunction::constant(0.0, a, b));
        const double lhs = 1.0 / std::fabs(a * sol.slope_a) +
                           1.0 / std::fabs(b * sol.slope_b);
        CHECK(std::fabs(lhs - 2.0 * (a + b) / (b - a)) < 1e-9);
    }
}

TEST_CASE("weighted integrals hit the closed-form anchors") {
    SUBCASE("odd integrand of the sign-changing solution vanishes for rho = 0") {
        BvpSolution sol = solve_linear(kZero13, SignPair{1, -1});
        const double v = weighted_integral(Integrand::odd_sqrt(), sol);
        CHECK(std::fabs(v) < 2e-6);
    }
    SUBCASE("decreasing integrand of the flat riccati solution equals pi") {
        RiccatiSolution sol = solve_riccati(kZero13);
        const double v = weighted_integral(Integrand::decreasing_sqrt(), sol);
        CHECK(std::fabs(v - kPi) < 1e-8);
    }
    SUBCASE("origin solution integral equals pi/2") {
        BvpSolution sol = solve_origin(RhoFunction::constant(0.0, 0.0, 2.0));
        const double v = weighted_integral(Integrand::odd_sqrt(), sol);
        CHECK(std::fabs(v - kPi / 2.0) < 1e-8);
    }
}

TEST_CASE("odd integrals are nonpositive for random coefficients") {
    std::mt19937_64 rng(73);
    const Integrand phi = Integrand::odd_sqrt();
    int produced = 0;
    while (produced < 25) {
        auto [a, b] = random_interval(rng);
        const RhoFunction rho = random_step_rho(rng, a, b, 8, 0.35, 0.1);
        BvpSolution sol = solve_linear(rho, SignPair{1, -1});
        if (!linear_hypothesis_holds(sol)) continue;
        CHECK(weighted_integral(phi, sol) <= 1e-5);
        // a plain odd polynomial works too
        Integrand cubic = Integrand::smooth_fn([](double t) { return t * t * t; });
        CHECK(weighted_integral(cubic, sol) <= 1e-8);
        ++produced;
    }
}

TEST_CASE("decreasing integrals dominate the flat baseline") {
    std::mt19937_64 rng(79);
    int produced = 0;
    while (produced < 25) {
        auto [a, b] = random_interval(rng);
        const RhoFunction rho = random_step_rho(rng, a, b, 8, 0.25, 0.1);
        RiccatiSolution sol = solve_riccati(rho);
        if (!riccati_hypothesis_holds(sol)) continue;
        Integrand decays = Integrand::smooth_fn([](double t) { return std::exp(-t); });
        RiccatiSolution flat = solve_riccati(RhoFunction::constant(0.0, a, b));
        const double lhs = weighted_integral(decays, sol);
        const double rhs = weighted_integral(decays, flat);
        CHECK(lhs >= rhs - 1e-8);
        ++produced;
    }
}

TEST_CASE("linear comparison: flat control is an exact tie") {
    ComparisonReport rep = compare_linear(kZero13, 1e-6);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.passed);
    CHECK(rep.equality);
    double worst = 0.0;
    for (size_t i = 0; i < rep.grid.size(); ++i)
        worst = std::max(worst, std::fabs(rep.lhs[i] - rep.rhs[i]));
    CHECK(worst < 1e-8);
}

TEST_CASE("linear comparison: a step coefficient separates strictly") {
    const RhoFunction rho = RhoFunction::step({2.0}, {0.0, 1.0}, 1.0, 3.0);
    BvpSolution sol = solve_linear(rho, SignPair{1, -1});
    REQUIRE(linear_hypothesis_holds(sol));
    ComparisonReport rep = compare_linear(rho, 1e-6);
    CHECK(rep.passed);
    CHECK(!rep.equality);
    REQUIRE(rep.strict_window.has_value());
    // strict at every grid threshold
    int strict = 0;
    for (size_t i = 0; i < rep.grid.size(); ++i)
        if (rep.rhs[i] - rep.lhs[i] > 1e-6) ++strict;
    CHECK(strict == static_cast<int>(rep.grid.size()));
}

TEST_CASE("riccati comparison: flat control gives equalities") {
    RiccatiComparison rep = compare_riccati(kZero13, 1e-6);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.dist.passed);
    CHECK(rep.dist.equality);
    CHECK(rep.sup_norm.holds);
    CHECK(std::fabs(rep.sup_norm.margin) < 1e-9);
    CHECK(rep.slope.passed);
}

TEST_CASE("riccati comparison: gentle step separates near the base level") {
    const RhoFunction rho = RhoFunction::step({2.0}, {0.0, 0.2}, 1.0, 3.0);
    RiccatiSolution sol = solve_riccati(rho);
    REQUIRE(riccati_hypothesis_holds(sol));
    RiccatiComparison rep = compare_riccati(rho, 1e-6);
    CHECK(rep.dist.passed);
    CHECK(rep.sup_norm.holds);
    CHECK(rep.slope.passed);
    REQUIRE(rep.dist.strict_window.has_value());
    CHECK(rep.dist.strict_window->first < 1.01);
}

TEST_CASE("riccati comparison: hypothesis violation is reported, not ignored") {
    // a large jump pulls w below 1 near the left endpoint
    const RhoFunction rho = RhoFunction::step({2.0}, {0.0, 3.0}, 1.0, 3.0);
    RiccatiSolution sol = solve_riccati(rho);
    CHECK(!riccati_hypothesis_holds(sol));
    RiccatiComparison rep = compare_riccati(rho, 1e-6);
    CHECK(!rep.hypothesis_ok);
    CHECK(!rep.hypothesis_note.empty());
}

TEST_SUITE_END();
