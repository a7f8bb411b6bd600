#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "isolab/density.hpp"

namespace isolab {

/// The radial kernel derived from a coefficient source: f = e^h, g = x f,
/// G = cumulative integral of g from the lower domain end, its inverse, and
/// J = g o G^{-1}. G is tabulated on quadrature cells at construction so that
/// evaluations cost one non-adaptive sub-cell rule; all evaluators are pure
/// and the object is immutable, so concurrent use needs no coordination.
class RadialKernel {
public:
    /// Kernel of a Density on [0, x_hi]; h as supplied (normalisation h(0)).
    RadialKernel(const Density& d, double x_hi, double eps_q = 1e-10);
    /// Kernel of a bare coefficient on its own domain [a, b]; h(a) = 0.
    explicit RadialKernel(const RhoFunction& rho, double eps_q = 1e-10);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double eps() const { return eps_q_; }

    double h(double x) const { return h_(x); }
    double f(double x) const;
    double g(double x) const { return x * f(x); }

    double G(double x) const;          // strictly increasing, G(lo) = 0
    double G_total() const { return cum_.back(); }
    double Ginv(double s) const;       // |Ginv(G(x)) - x| <= 10 eps_q
    double J(double s) const { return g(Ginv(s)); }

    double rho(double x, Side side) const { return rho_(x, side); }

    /// Smooth-panel boundaries (domain ends plus coefficient breakpoints).
    const std::vector<double>& panels() const { return panels_; }

private:
    void build_table();
    double lo_, hi_, eps_q_;
    std::function<double(double)> h_;
    std::function<double(double, Side)> rho_;
    std::vector<double> panels_;       // smooth panels
    std::vector<double> cells_;        // quadrature cells refining the panels
    std::vector<double> cum_;          // G at cell boundaries
};

} // namespace isolab
