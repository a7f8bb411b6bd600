// Independent shooting oracles for the boundary-value problems: fixed-step
// RK4 per smooth panel, with the eigenvalue recovered from the boundary data.
// Test-only code; deliberately shares nothing with the closed-form solvers.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "isolab/density.hpp"

namespace isolab::testing {

inline double rho_inside_panel(const RhoFunction& rho, double x, double panel_hi) {
    return x >= panel_hi ? rho.left(panel_hi) : rho.right(x);
}

/// RK4 for u' = -(1/x + rho) u - lambda from x_start with u(x_start) = u0;
/// records (x, u) at panel boundaries and an even sample grid if asked.
inline double rk4_linear(const RhoFunction& rho, double x_start, double u0,
                         double lambda, int steps_per_panel = 2048,
                         std::vector<std::pair<double, double>>* samples = nullptr) {
    double u = u0;
    auto panels = rho.panels();
    for (size_t p = 0; p + 1 < panels.size(); ++p) {
        double lo = std::max(panels[p], x_start);
        const double hi = panels[p + 1];
        if (hi <= x_start) continue;
        const int n = steps_per_panel;
        const double h = (hi - lo) / n;
        auto f = [&](double x, double uu) {
            return -(1.0 / x + rho_inside_panel(rho, x, hi)) * uu - lambda;
        };
        for (int i = 0; i < n; ++i) {
            const double x = lo + i * h;
            const double k1 = f(x, u);
            const double k2 = f(x + 0.5 * h, u + 0.5 * h * k1);
            const double k3 = f(x + 0.5 * h, u + 0.5 * h * k2);
            const double k4 = f(x + h, u + h * k3);
            u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (samples && (i % 64 == 0))
                samples->push_back({x + h, u});
        }
    }
    return u;
}

/// Shooting value of lambda for the two-point problem u(a) = eta1, u(b) = eta2;
/// u(b; lambda) is affine in lambda, so two integrations determine it.
inline double shoot_linear_lambda(const RhoFunction& rho, int eta1, int eta2) {
    const double ub0 = rk4_linear(rho, rho.a(), eta1, 0.0);
    const double ub1 = rk4_linear(rho, rho.a(), eta1, 1.0);
    const double slope = ub0 - ub1;
    if (std::fabs(slope) < 1e-300)
        throw std::runtime_error("shoot_linear_lambda: degenerate shooting slope");
    return (ub0 - eta2) / slope;
}

/// Shooting value for the origin problem u(0) = 0, u(b) = 1: solutions scale
/// linearly in lambda, starting from the series u = -lambda x / 2 near 0.
inline double shoot_origin_lambda(const RhoFunction& rho) {
    const double b = rho.b();
    const double x0 = 1e-7 * b;
    const double ub1 = rk4_linear(rho, x0, -0.5 * x0, 1.0, 4096);
    if (std::fabs(ub1) < 1e-300)
        throw std::runtime_error("shoot_origin_lambda: degenerate value at b");
    return 1.0 / ub1;
}

/// RK4 for the Riccati equation w' = (1/x + rho) w - lambda w^2 from w(a) = 1.
inline double rk4_riccati(const RhoFunction& rho, double lambda,
                          int steps_per_panel = 2048) {
    double w = 1.0;
    auto panels = rho.panels();
    for (size_t p = 0; p + 1 < panels.size(); ++p) {
        const double lo = panels[p], hi = panels[p + 1];
        const int n = steps_per_panel;
        const double h = (hi - lo) / n;
        auto f = [&](double x, double ww) {
            return (1.0 / x + rho_inside_panel(rho, x, hi)) * ww - lambda * ww * ww;
        };
        for (int i = 0; i < n; ++i) {
            const double x = lo + i * h;
            const double k1 = f(x, w);
            const double k2 = f(x + 0.5 * h, w + 0.5 * h * k1);
            const double k3 = f(x + 0.5 * h, w + 0.5 * h * k2);
            const double k4 = f(x + h, w + h * k3);
            w += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!std::isfinite(w) || w > 1e9) return 1e9;
            if (w < -1e9) return -1e9;
        }
    }
    return w;
}

/// Bisection on lambda for w(b; lambda) = 1; w(b) decreases in lambda.
inline double shoot_riccati_lambda(const RhoFunction& rho) {
    double lo = 1e-9, hi = 1.0;
    while (rk4_riccati(rho, hi) > 1.0) {
        hi *= 2.0;
        if (hi > 1e6) throw std::runtime_error("shoot_riccati_lambda: no bracket");
    }
    for (int it = 0; it < 100 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rk4_riccati(rho, mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace isolab::testing
