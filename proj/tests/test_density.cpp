#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "isolab/density.hpp"
#include "isolab/kernel.hpp"
#include "isolab/quadrature.hpp"
#include "isolab/random_rho.hpp"

using namespace isolab;

TEST_SUITE_BEGIN("density");

TEST_CASE("one-sided slopes at a piecewise-linear kink") {
    const Density d = Density::piecewise_linear({0.0, 1.0}, {0.0, 1.0});
    CHECK(d.rho(1.0, Side::left) == 0.0);
    CHECK(d.rho(1.0, Side::right) == 1.0);
    CHECK(d.rho(1.0, Side::mean) == 0.5);
    CHECK(d.rho(0.5, Side::mean) == 0.0);
    CHECK(d.rho(1.5, Side::mean) == 1.0);
}

TEST_CASE("power family slope") {
    const Density d = Density::power(1.0, 2.0);
    CHECK(std::fabs(d.rho(1.5, Side::mean) - 3.0) < 1e-15);
}

TEST_CASE("constant density has zero slope and no plateau edge") {
    const Density d = Density::constant(2.5);
    CHECK(d.rho(0.7, Side::mean) == 0.0);
    CHECK(d.rho(3.0, Side::left) == 0.0);
    CHECK(!d.plateau_radius().has_value());
    CHECK(d.h(10.0) == 2.5);
}

TEST_CASE("plateau radius") {
    CHECK(Density::piecewise_linear({0.0, 1.0}, {0.0, 1.0}).plateau_radius() == 1.0);
    CHECK(Density::linear(0.3).plateau_radius() == 0.0);
    CHECK(!Density::piecewise_linear({0.0, 1.0}, {0.0, 0.0}).plateau_radius().has_value());
}

TEST_CASE("construction rejects non-convex or decreasing profiles") {
    CHECK_THROWS_AS(Density::linear(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(Density::power(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(Density::power(-0.1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(Density::piecewise_linear({0.0, 1.0}, {1.0, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Density::piecewise_linear({0.5, 1.0}, {0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("rho monotone in x for random densities") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const Density d = random_convex_density(rng);
        double prev = d.rho(0.0, Side::right);
        for (int i = 1; i <= 100; ++i) {
            const double x = 0.08 * i;
            const double cur = d.rho(x, Side::right);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("rho function one-sided limits and primitive") {
    const RhoFunction r = RhoFunction::step({2.0}, {0.0, 1.0}, 1.0, 3.0);
    CHECK(r.left(2.0) == 0.0);
    CHECK(r.right(2.0) == 1.0);
    CHECK(r.mean(2.0) == 0.5);
    CHECK(r.sup() == 1.0);
    CHECK(r.primitive(2.0) == 0.0);
    CHECK(std::fabs(r.primitive(3.0) - 1.0) < 1e-15);
    CHECK_THROWS_AS(r.left(1.0), std::invalid_argument);
    CHECK_THROWS_AS(RhoFunction::step({2.0}, {1.0, 0.5}, 1.0, 3.0),
                    std::invalid_argument);
}

TEST_CASE("kernel of the flat density") {
    const Density d = Density::constant(0.0);
    const RadialKernel k(d, 4.0);
    CHECK(std::fabs(k.G(3.0) - 4.5) < 1e-10);
    CHECK(std::fabs(k.Ginv(4.5) - 3.0) < 1e-9);
    CHECK(std::fabs(k.J(2.0) - 2.0) < 1e-9);
}

TEST_CASE("kernel of the square-exponent density against the closed form") {
    // oracle: G(t) = (e^{t^2} - 1)/2, compared against the cumulative
    // quadrature of t e^{t^2}
    const Density d = Density::power(1.0, 2.0);
    const RadialKernel k(d, 2.0);
    auto exact = [](double t) { return 0.5 * (std::exp(t * t) - 1.0); };
    CHECK(std::fabs(k.G(1.0) - exact(1.0)) < 1e-10);
    for (double t : {0.3, 0.77, 1.5, 2.0})
        CHECK(std::fabs(k.G(t) - exact(t)) < 1e-9 * std::max(1.0, exact(t)));
}

TEST_CASE("round trip Ginv(G(x)) over random points") {
    std::mt19937_64 rng(11);
    const Density d = Density::piecewise_linear({0.0, 0.7, 1.4}, {0.0, 0.5, 1.5});
    const RadialKernel k(d, 3.0);
    std::uniform_real_distribution<double> xs(0.01, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = xs(rng);
        CHECK(std::fabs(k.Ginv(k.G(x)) - x) < 1e-9);
    }
}

TEST_CASE("kernel satisfies its own differential identity") {
    // g' = (1/x + rho) g at continuity points, via central differences
    std::mt19937_64 rng(13);
    const RhoFunction rho = random_step_rho(rng, 0.5, 2.5, 6, 0.5, 0.0);
    const RadialKernel k(rho);
    std::uniform_real_distribution<double> xs(0.51, 2.49);
    const double h = 1e-6;
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const double x = xs(rng);
        bool near_kink = false;
        for (double p : k.panels())
            if (std::fabs(x - p) < 4.0 * h) near_kink = true;
        if (near_kink) continue;
        const double fd = (k.g(x + h) - k.g(x - h)) / (2.0 * h);
        const double rhs = (1.0 / x + k.rho(x, Side::mean)) * k.g(x);
        CHECK(std::fabs(fd - rhs) <= 100.0 * 1e-10 * k.g(x));
        ++checked;
    }
    CHECK(checked > 800);
}

TEST_CASE("normalisation invariance of kernel ratios") {
    // shifting h by a constant rescales g but cancels in the mean-type ratios
    const double a = 0.5, b = 2.0;
    const Density d1 = Density::linear(0.7, 0.0);
    const Density d2 = Density::linear(0.7, 1.3);
    const RadialKernel k1(d1, b), k2(d2, b);
    const double m1 = (k1.g(b) - k1.g(a)) / (k1.G(b) - k1.G(a));
    const double m2 = (k2.g(b) - k2.g(a)) / (k2.G(b) - k2.G(a));
    CHECK(std::fabs(m1 - m2) < 1e-9);
    const double mh1 = (k1.g(b) + k1.g(a)) / (k1.G(b) - k1.G(a));
    const double mh2 = (k2.g(b) + k2.g(a)) / (k2.G(b) - k2.G(a));
    CHECK(std::fabs(mh1 - mh2) < 1e-9);
}

TEST_CASE("density spec files") {
    std::istringstream good("family piecewise-linear\nparams 0 0 1 1\nh0 0\n");
    const Density d = Density::parse(good, "good.cfg");
    CHECK(d.family() == Density::Family::piecewise_linear);
    CHECK(d.plateau_radius() == 1.0);

    std::istringstream bad_number("family linear\nparams abc\n");
    CHECK_THROWS_WITH_AS(Density::parse(bad_number, "bad.cfg"),
                         doctest::Contains("bad.cfg:2"), std::invalid_argument);

    std::istringstream bad_key("family linear\nparams 1\nwhat 3\n");
    CHECK_THROWS_WITH_AS(Density::parse(bad_key, "bad.cfg"),
                         doctest::Contains("unknown key 'what'"), std::invalid_argument);

    const Density round = Density::power(0.5, 1.5, 0.25);
    std::istringstream re(round.to_spec());
    const Density back = Density::parse(re);
    CHECK(back.h(1.7) == doctest::Approx(round.h(1.7)).epsilon(1e-15));
}

TEST_CASE("density slope restriction to an interval") {
    const Density d = Density::piecewise_linear({0.0, 1.0, 2.0}, {0.0, 0.5, 2.0});
    const RhoFunction r = density_slope_restriction(d, 0.5, 3.0);
    CHECK(r.right(0.5) == 0.0);
    CHECK(r.left(3.0) == 2.0);
    CHECK(r.jumps().size() == 2);
    CHECK_THROWS_AS(density_slope_restriction(Density::power(1.0, 2.0), 0.5, 1.0),
                    std::invalid_argument);
}

TEST_SUITE_END();
