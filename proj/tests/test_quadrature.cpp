#include <doctest.h>

#include <cmath>

#include "isolab/quadrature.hpp"

using namespace isolab;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("polynomial") {
    const double v = integrate([](double t) { return t; }, 1.0, 3.0);
    CHECK(std::fabs(v - 4.0) < 1e-13);
}

TEST_CASE("smooth exponential against closed form") {
    // oracle: d/dt (e^{t^2} - 1)/2 = t e^{t^2}
    const double v = integrate([](double t) { return t * std::exp(t * t); }, 0.0, 1.0);
    const double exact = 0.5 * (std::exp(1.0) - 1.0);
    CHECK(std::fabs(v - exact) < 1e-12);
}

TEST_CASE("left endpoint power singularity") {
    QuadratureOptions opt;
    opt.singular_left = true;
    const double v = integrate([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, opt);
    CHECK(std::fabs(v - 2.0) < 1e-10);
}

TEST_CASE("half-circle density integral") {
    // (t/2) / sqrt(1 - t^2/4) / t on (0, 2); the right endpoint is singular
    QuadratureOptions opt;
    opt.singular_right = true;
    const double v = integrate(
        [](double t) { return 0.5 / std::sqrt((1.0 - 0.5 * t) * (1.0 + 0.5 * t)); },
        0.0, 2.0, opt);
    CHECK(std::fabs(v - kPi / 2.0) < 1e-6);
}

TEST_CASE("half-circle integral with exact endpoint distances") {
    // same integrand fed the distance to the endpoints, which removes the
    // cancellation near t = 2 entirely
    QuadratureOptions opt;
    opt.singular_right = true;
    const double v = integrate(
        SingularIntegrand([](double t, double, double db) {
            return 0.5 / std::sqrt(0.5 * db * (1.0 + 0.5 * t));
        }),
        0.0, 2.0, opt);
    CHECK(std::fabs(v - kPi / 2.0) < 1e-10);
}

TEST_CASE("non-integrable singularity does not converge") {
    QuadratureOptions opt;
    opt.max_depth = 20;
    CHECK_THROWS_AS(integrate([](double t) { return 1.0 / t; }, 0.0, 1.0, opt),
                    QuadratureError);
}

TEST_CASE("NaN from the integrand is reported") {
    CHECK_THROWS_AS(integrate([](double t) { return std::sqrt(t - 0.5); }, 0.0, 1.0),
                    std::domain_error);
}

TEST_CASE("invalid interval") {
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 1.0),
                    std::invalid_argument);
}

TEST_SUITE_END();
