#include "isolab/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isolab/means.hpp"

namespace isolab {

namespace {

// Residual sample points: n points distributed over the smooth panels,
// keeping 2*fd_step clear of every panel boundary.
std::vector<double> interior_points(const std::vector<double>& panels, int n, double margin) {
    std::vector<double> pts;
    const double total = panels.back() - panels.front();
    for (size_t p = 0; p + 1 < panels.size(); ++p) {
        const double lo = panels[p] + margin, hi = panels[p + 1] - margin;
        if (hi <= lo) continue;
        const int k = std::max(2, static_cast<int>(std::lround(
                          n * (panels[p + 1] - panels[p]) / total)));
        for (int i = 0; i < k; ++i)
            pts.push_back(lo + (hi - lo) * (i + 0.5) / k);
    }
    return pts;
}

double fd_derivative(const PanelFunction& fn, double x, double step) {
    return (fn(x + step) - fn(x - step)) / (2.0 * step);
}

// The central-difference step shrinks with x so the 1/x^3 growth of the
// solution's third derivative near small radii cannot inflate the truncation
// error past the nominal 1e-5 scale.
double fd_step(double x) {
    return 1e-5 * std::clamp(0.5 * x, 0.02, 1.0);
}

double max_linear_residual(const PanelFunction& u, const RhoFunction& rho,
                           double lambda, int n_points) {
    double worst = 0.0;
    for (double x : interior_points(u.panels, n_points, 2.5e-5)) {
        const double r = fd_derivative(u, x, fd_step(x)) +
                         (1.0 / x + rho.mean(x)) * u(x) + lambda;
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

double max_riccati_residual(const PanelFunction& w, const RhoFunction& rho,
                            double lambda, int n_points) {
    double worst = 0.0;
    for (double x : interior_points(w.panels, n_points, 2.5e-5)) {
        const double wx = w(x);
        const double r = fd_derivative(w, x, fd_step(x)) + lambda * wx * wx -
                         (1.0 / x + rho.mean(x)) * wx;
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

} // namespace

BvpSolution solve_linear(const RhoFunction& rho, SignPair eta, double eps_q) {
    const double a = rho.a(), b = rho.b();
    if (!(a > 0.0))
        throw std::invalid_argument("solve_linear: requires a > 0 (a = 0 is the origin problem)");
    if (std::abs(eta.eta1) != 1 || std::abs(eta.eta2) != 1)
        throw std::invalid_argument("solve_linear: boundary signs must be +1 or -1");

    auto kernel = std::make_shared<RadialKernel>(rho, eps_q);
    const double m = compute_m(*kernel);
    const double mhat = compute_mhat(*kernel);
    const double ga = kernel->g(a);

    BvpSolution sol;
    sol.a = a;
    sol.b = b;
    sol.eta = eta;
    sol.kernel = kernel;

    // Base closed forms for eta1 = +1; the eta1 = -1 cases follow by linearity.
    const double sign = eta.eta1;
    double coeff;                                // u = (coeff * G + g(a)) / g, times sign
    if (eta.eta1 * eta.eta2 > 0) {
        coeff = m;
        sol.lambda = -sign * m;
    } else {
        coeff = -mhat;
        sol.lambda = sign * mhat;
    }
    sol.u.lo = a;
    sol.u.hi = b;
    sol.u.panels = rho.panels();
    RadialKernel* K = kernel.get();
    sol.u.eval = [K, coeff, ga, sign](double x) {
        return sign * (coeff * K->G(x) + ga) / K->g(x);
    };

    // one-sided slopes from the equation itself
    sol.slope_a = -sol.lambda - (1.0 / a + rho.right(a)) * eta.eta1;
    sol.slope_b = -sol.lambda - (1.0 / b + rho.left(b)) * eta.eta2;

    if (eta.eta1 * eta.eta2 < 0) {
        // unique zero c in (a, b): coeff * G(c) + g(a) = 0
        const double target = ga / mhat;
        sol.zero = K->Ginv(target);
    }
    sol.residual_max = max_linear_residual(sol.u, rho, sol.lambda, 256);
    return sol;
}

RiccatiSolution solve_riccati(const RhoFunction& rho, double eps_q) {
    const double a = rho.a(), b = rho.b();
    if (!(a > 0.0))
        throw std::invalid_argument("solve_riccati: requires a > 0");
    auto kernel = std::make_shared<RadialKernel>(rho, eps_q);
    const double m = compute_m(*kernel);
    const double ga = kernel->g(a);

    RiccatiSolution sol;
    sol.a = a;
    sol.b = b;
    sol.lambda = m;
    sol.kernel = kernel;
    sol.w.lo = a;
    sol.w.hi = b;
    sol.w.panels = rho.panels();
    RadialKernel* K = kernel.get();
    sol.w.eval = [K, m, ga](double x) { return K->g(x) / (m * K->G(x) + ga); };

    sol.slope_a = (1.0 / a + rho.right(a)) - m;  // w(a) = 1
    sol.slope_b = (1.0 / b + rho.left(b)) - m;

    // locate the supremum: scan each smooth panel, then golden-section refine
    double best_x = a, best_w = 1.0;
    const auto& panels = sol.w.panels;
    for (size_t p = 0; p + 1 < panels.size(); ++p) {
        const int n = 512;
        double plo = panels[p], phi = panels[p + 1];
        int best_i = -1;
        double panel_best = -1.0;
        for (int i = 0; i <= n; ++i) {
            const double x = plo + (phi - plo) * i / n;
            const double wx = sol.w(x);
            if (wx > panel_best) { panel_best = wx; best_i = i; }
        }
        double lo = plo + (phi - plo) * std::max(0, best_i - 1) / n;
        double hi = plo + (phi - plo) * std::min(n, best_i + 1) / n;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = sol.w(x1), f2 = sol.w(x2);
        for (int it = 0; it < 80 && hi - lo > 1e-12 * (b - a); ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo); f2 = sol.w(x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo); f1 = sol.w(x1);
            }
        }
        const double xm = 0.5 * (lo + hi), wm = sol.w(xm);
        if (wm > best_w) { best_w = wm; best_x = xm; }
    }
    sol.sup_w = best_w;
    sol.arg_sup = best_x;
    sol.residual_max = max_riccati_residual(sol.w, rho, sol.lambda, 256);
    return sol;
}

BvpSolution solve_origin(const RhoFunction& rho, double eps_q) {
    const double a = rho.a(), b = rho.b();
    if (a != 0.0)
        throw std::invalid_argument("solve_origin: coefficient domain must start at 0");
    auto kernel = std::make_shared<RadialKernel>(rho, eps_q);
    const double gb = kernel->g(b);
    const double Gb = kernel->G(b);

    BvpSolution sol;
    sol.a = 0.0;
    sol.b = b;
    sol.eta = SignPair{0, 1};                    // boundary data 0 and 1
    sol.lambda = -gb / Gb;
    sol.kernel = kernel;
    sol.u.lo = 0.0;
    sol.u.hi = b;
    sol.u.panels = rho.panels();
    RadialKernel* K = kernel.get();
    const double scale = gb / Gb;
    sol.u.eval = [K, scale](double x) {
        if (x <= 0.0) return 0.0;
        return scale * K->G(x) / K->g(x);
    };
    sol.slope_a = -0.5 * sol.lambda;             // series limit of u' at 0
    sol.slope_b = -sol.lambda - (1.0 / b + rho.left(b));
    sol.residual_max = max_linear_residual(sol.u, rho, sol.lambda, 256);
    return sol;
}

double residual_check(const BvpSolution& sol, const RhoFunction& rho, int n_points) {
    if (n_points < 2)
        throw std::invalid_argument("residual_check: need n_points >= 2");
    return max_linear_residual(sol.u, rho, sol.lambda, n_points);
}

double residual_check(const RiccatiSolution& sol, const RhoFunction& rho, int n_points) {
    if (n_points < 2)
        throw std::invalid_argument("residual_check: need n_points >= 2");
    return max_riccati_residual(sol.w, rho, sol.lambda, n_points);
}

} // namespace isolab
