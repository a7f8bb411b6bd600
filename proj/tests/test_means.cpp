#include <doctest.h>

#include <cmath>
#include <random>

#include "isolab/means.hpp"
#include "isolab/random_rho.hpp"

using namespace isolab;

TEST_SUITE_BEGIN("means");

TEST_CASE("zero coefficient pins both means") {
    const RhoFunction zero = RhoFunction::constant(0.0, 1.0, 3.0);
    CHECK(std::fabs(compute_m(zero, 1.0, 3.0) - 0.5) < 1e-10);
    CHECK(std::fabs(compute_mhat(zero, 1.0, 3.0) - 1.0) < 1e-10);
}

TEST_CASE("constant coefficient against the exponential closed form") {
    // oracle: with unit slope, m = (b e^b - a e^a) / ((b-1) e^b - (a-1) e^a)
    auto closed = [](double a, double b) {
        return (b * std::exp(b) - a * std::exp(a)) /
               ((b - 1.0) * std::exp(b) - (a - 1.0) * std::exp(a));
    };
    const RhoFunction one = RhoFunction::constant(1.0, 1.0, 2.0);
    const double m = compute_m(one, 1.0, 2.0);
    CHECK(std::fabs(m - (2.0 - std::exp(-1.0))) < 1e-10);
    CHECK(std::fabs(m - closed(1.0, 2.0)) < 1e-10);
    // the upper bound is strict for a positive constant coefficient
    CHECK(m < 1.0 + 2.0 / 3.0);
}

TEST_CASE("mhat for the zero coefficient is 2/(b-a) on random intervals") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        auto [a, b] = random_interval(rng);
        const RhoFunction zero = RhoFunction::constant(0.0, a, b);
        CHECK(std::fabs(compute_mhat(zero, a, b) - 2.0 / (b - a)) < 1e-9);
    }
}

TEST_CASE("step coefficient satisfies the reverse bound strictly") {
    const RhoFunction rho = RhoFunction::step({2.0}, {0.0, 1.0}, 1.0, 3.0);
    const double mhat = compute_mhat(rho, 1.0, 3.0);
    CHECK((3.0 - 1.0) * mhat < 5.0);   // 2 + a rho(a+) + b rho(b-) = 5
    // quadrature oracle: g = t on [1,2], t e^{t-2} on [2,3]
    const double integral = 1.5 + 2.0 * std::exp(1.0) - 1.0;
    const double expected = (1.0 + 3.0 * std::exp(1.0)) / integral;
    CHECK(std::fabs(mhat - expected) < 1e-10);
}

TEST_CASE("all four statements with equality detection") {
    SUBCASE("zero coefficient gives equality in both sharp bounds") {
        const RhoFunction zero = RhoFunction::constant(0.0, 1.0, 3.0);
        const MeansReport r = verify_interval_means(zero, 1.0, 3.0);
        CHECK(r.lem81.holds);
        CHECK(r.thm83.holds);
        CHECK(r.lem84.holds);
        CHECK(r.thm85.holds);
        CHECK(r.thm83.equality);
        CHECK(r.thm85.equality);
        CHECK(r.rho_identically_zero);
    }
    SUBCASE("positive constant gives strict inequality") {
        const RhoFunction two = RhoFunction::constant(2.0, 1.0, 3.0);
        const MeansReport r = verify_interval_means(two, 1.0, 3.0);
        CHECK(r.thm83.holds);
        CHECK(r.thm83.margin > 1e-3);
        CHECK(!r.thm83.equality);
        CHECK(!r.thm85.equality);
    }
    SUBCASE("random steps hold with strict margins") {
        std::mt19937_64 rng(17);
        for (int i = 0; i < 100; ++i) {
            auto [a, b] = random_interval(rng);
            const RhoFunction rho = random_step_rho(rng, a, b, 8, 0.5, 0.0);
            const MeansReport r = verify_interval_means(rho, a, b);
            CHECK(r.lem81.holds);
            CHECK(r.thm83.holds);
            CHECK(r.lem84.holds);
            CHECK(r.thm85.holds);
        }
    }
}

TEST_CASE("interval starting at zero is allowed") {
    const RhoFunction rho = RhoFunction::step({1.0}, {0.0, 2.0}, 0.0, 2.0);
    const MeansReport r = verify_interval_means(rho, 0.0, 2.0);
    CHECK(r.lem81.holds);
    CHECK(r.thm85.holds);
    CHECK(r.m > 0.0);
}

TEST_CASE("scaling identity for constant coefficients") {
    // m(lambda, a, b) = lambda m(1, lambda a, lambda b)
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> lam_dist(0.2, 2.5);
    for (int i = 0; i < 10; ++i) {
        const double lam = lam_dist(rng);
        auto [a, b] = random_interval(rng);
        const double lhs = compute_m(RhoFunction::constant(lam, a, b), a, b);
        const double rhs =
            lam * compute_m(RhoFunction::constant(1.0, lam * a, lam * b), lam * a, lam * b);
        CHECK(std::fabs(lhs - rhs) < 1e-8 * std::max(1.0, lhs));
    }
}

TEST_CASE("report serialisation carries the statement fields") {
    const RhoFunction zero = RhoFunction::constant(0.0, 1.0, 3.0);
    const MeansReport r = verify_interval_means(zero, 1.0, 3.0);
    CHECK(r.json().find("\"Thm-8.5-i\"") != std::string::npos);
    CHECK(r.csv_row().find(",1,") != std::string::npos);        // equality flags
    CHECK(MeansReport::csv_header().find("mhat0") != std::string::npos);
}

TEST_SUITE_END();
