#include "isolab/quadrature.hpp"

#include <cmath>
#include <limits>

namespace isolab {

namespace {

// 15-point Kronrod abscissae (positive half) and weights; the embedded
// 7-point Gauss rule sits on the odd-indexed abscissae.
const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double value;
    double err;
};

Panel gk15_panel(const std::function<double(double)>& fn, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 8; ++i) {
        double f1, f2;
        if (i == 7) {
            f1 = fn(c);
            resk += kWgk[7] * f1;
            resg += kWg[3] * f1;
            break;
        }
        f1 = fn(c - h * kXgk[i]);
        f2 = fn(c + h * kXgk[i]);
        resk += kWgk[i] * (f1 + f2);
        if (i % 2 == 1)
            resg += kWg[i / 2] * (f1 + f2);
    }
    return {resk * h, std::fabs(resk - resg) * h};
}

double adaptive_gk(const std::function<double(double)>& fn, double a, double b,
                   double tol, int depth, int max_depth) {
    Panel p = gk15_panel(fn, a, b);
    if (!std::isfinite(p.value))
        throw std::domain_error("integrate: non-finite integrand value in [" +
                                std::to_string(a) + ", " + std::to_string(b) + "]");
    if (p.err <= tol)
        return p.value;
    if (depth >= max_depth)
        throw QuadratureError("integrate: tolerance not reached", a, b);
    const double c = 0.5 * (a + b);
    return adaptive_gk(fn, a, c, 0.5 * tol, depth + 1, max_depth) +
           adaptive_gk(fn, c, b, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

double gauss_kronrod_15(const std::function<double(double)>& fn, double a, double b,
                        double* err) {
    Panel p = gk15_panel(fn, a, b);
    if (err) *err = p.err;
    return p.value;
}

double tanh_sinh(const SingularIntegrand& fn, double a, double b,
                 double abs_tol, double rel_tol) {
    const double half = 0.5 * (b - a);
    const double kPiHalf = 1.5707963267948966;
    const double t_max = 4.0;
    const int max_level = 9;

    // One node: parameter t, returns weight * f. Offsets from the endpoints
    // are computed in cancellation-free form 1 - tanh(u) = 2 / (1 + e^{2u}).
    auto term = [&](double t) -> double {
        const double u = kPiHalf * std::sinh(t);
        const double ch = std::cosh(u);
        const double w = kPiHalf * std::cosh(t) / (ch * ch);
        double d_near = half * 2.0 / (1.0 + std::exp(2.0 * std::fabs(u)));
        if (d_near <= 0.0)
            d_near = std::numeric_limits<double>::min();
        double x, da, db;
        if (t >= 0.0) {
            x = b - d_near; da = (b - a) - d_near; db = d_near;
        } else {
            x = a + d_near; da = d_near; db = (b - a) - d_near;
        }
        double v = fn(x, da, db);
        if (!std::isfinite(v)) {
            // Deep in the endpoint zone the actual contribution is below the
            // truncation level of the rule; elsewhere a non-finite value is an
            // integrand failure.
            if (std::fabs(t) >= 2.8)
                return 0.0;
            throw std::domain_error("tanh_sinh: non-finite integrand at x = " +
                                    std::to_string(x));
        }
        return w * v;
    };

    double h = 1.0;
    double sum = term(0.0);
    for (int k = 1; k * h <= t_max; ++k)
        sum += term(k * h) + term(-k * h);
    double estimate = sum * h * half;
    double prev = estimate;
    double prev_diff = std::numeric_limits<double>::infinity();

    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        // new nodes are the odd multiples of the refined step
        for (int k = 1; k * h <= t_max; k += 2)
            sum += term(k * h) + term(-k * h);
        estimate = sum * h * half;
        const double diff = std::fabs(estimate - prev);
        const double goal = std::max(abs_tol, rel_tol * std::fabs(estimate));
        if (level >= 3 && diff <= goal)
            return estimate;
        // truncated endpoint zones put a floor under the achievable accuracy;
        // accept stagnation there, but only once the error is already small
        if (level >= 5 && diff >= 0.5 * prev_diff &&
            diff <= 1e-5 * std::max(1.0, std::fabs(estimate)))
            return estimate;
        prev = estimate;
        prev_diff = diff;
    }
    throw QuadratureError("tanh_sinh: tolerance not reached", a, b);
}

double integrate(const std::function<double(double)>& fn, double a, double b,
                 const QuadratureOptions& opt) {
    return integrate(SingularIntegrand([&fn](double x, double, double) { return fn(x); }),
                     a, b, opt);
}

double integrate(const SingularIntegrand& fn, double a, double b,
                 const QuadratureOptions& opt) {
    if (!(a < b))
        throw std::invalid_argument("integrate: requires a < b");
    if (opt.singular_left || opt.singular_right)
        return tanh_sinh(fn, a, b, opt.abs_tol, opt.rel_tol);
    auto plain = [&fn, a, b](double x) { return fn(x, x - a, b - x); };
    Panel rough = gk15_panel(plain, a, b);
    const double tol = std::max({opt.abs_tol, opt.rel_tol * std::fabs(rough.value), 1e-300});
    return adaptive_gk(plain, a, b, tol, 0, opt.max_depth);
}

} // namespace isolab
