#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "isolab/density.hpp"
#include "isolab/kernel.hpp"

namespace isolab {

/// A piecewise-smooth scalar function carrying its smooth-panel boundaries so
/// that finite differences and level-set scans never straddle a kink.
struct PanelFunction {
    double lo = 0.0, hi = 0.0;
    std::vector<double> panels;                  // lo, interior kinks, hi
    std::function<double(double)> eval;
    double operator()(double x) const { return eval(x); }
};

struct SignPair {
    int eta1 = 1, eta2 = 1;                      // each +1 or -1
};

/// Solution (u, lambda) of  u' + (1/x + rho) u + lambda = 0,  u(a) = eta1,
/// u(b) = eta2, built by quadrature from the closed form.
struct BvpSolution {
    double a = 0.0, b = 0.0;
    SignPair eta;
    double lambda = 0.0;
    PanelFunction u;
    std::optional<double> zero;                  // the unique c with u(c) = 0 when eta1*eta2 = -1
    double residual_max = 0.0;                   // finite-difference residual at build
    double slope_a = 0.0, slope_b = 0.0;         // one-sided u' at the endpoints (from the ODE)
    std::shared_ptr<RadialKernel> kernel;
};

/// Solution (w, lambda) of  w' + lambda w^2 = (1/x + rho) w,  w(a) = w(b) = 1.
struct RiccatiSolution {
    double a = 0.0, b = 0.0;
    double lambda = 0.0;                         // equals the interval mean m
    PanelFunction w;
    double sup_w = 0.0, arg_sup = 0.0;
    double residual_max = 0.0;
    double slope_a = 0.0, slope_b = 0.0;
    std::shared_ptr<RadialKernel> kernel;
};

/// Closed-form solution of the two-point problem on [a, b], 0 < a < b.
/// lambda is -m, m, mhat or -mhat according to the sign pattern.
BvpSolution solve_linear(const RhoFunction& rho, SignPair eta, double eps_q = 1e-10);

/// Closed-form solution of the Riccati problem; lambda = m.
RiccatiSolution solve_riccati(const RhoFunction& rho, double eps_q = 1e-10);

/// The problem on [0, b] with u(0) = 0, u(b) = 1; lambda = -g(b)/G(b).
BvpSolution solve_origin(const RhoFunction& rho, double eps_q = 1e-10);

/// Worst absolute residual of the defining equation at n interior continuity
/// points, using central differences that stay inside one smooth panel.
double residual_check(const BvpSolution& sol, const RhoFunction& rho, int n_points);
double residual_check(const RiccatiSolution& sol, const RhoFunction& rho, int n_points);

} // namespace isolab
