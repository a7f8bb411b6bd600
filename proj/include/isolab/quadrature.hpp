#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace isolab {

/// Thrown when a quadrature rule cannot reach the requested tolerance;
/// carries the subinterval on which refinement gave up.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double lo, double hi)
        : std::runtime_error(what + " on subinterval [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "]"),
          lo_(lo), hi_(hi) {}
    double lo() const { return lo_; }
    double hi() const { return hi_; }
private:
    double lo_, hi_;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int    max_depth = 50;
    /// Flags for integrable power-type endpoint singularities (t^-alpha, alpha < 1);
    /// when set, the interval is handled with tanh-sinh node placement.
    bool   singular_left  = false;
    bool   singular_right = false;
};

/// Integrand that is also told its exact distance from each endpoint.
/// Needed when the singular part of the integrand would be destroyed by
/// cancellation if reconstructed from x alone.
using SingularIntegrand = std::function<double(double x, double dist_lo, double dist_hi)>;

/// Adaptive Gauss-Kronrod (7-15) on smooth integrands; tanh-sinh when an
/// endpoint is flagged singular. Throws QuadratureError on non-convergence and
/// std::domain_error on a NaN from the integrand away from flagged endpoints.
double integrate(const std::function<double(double)>& fn, double a, double b,
                 const QuadratureOptions& opt = {});

double integrate(const SingularIntegrand& fn, double a, double b,
                 const QuadratureOptions& opt = {});

/// Non-adaptive single Gauss-Kronrod panel; `err` (optional) receives the
/// |K15 - G7| estimate. Used for cheap sub-panel evaluation of cached kernels.
double gauss_kronrod_15(const std::function<double(double)>& fn, double a, double b,
                        double* err = nullptr);

/// Double-exponential rule on [a,b]; the integrand receives distances to both
/// endpoints. Non-finite values in the extreme endpoint zone are treated as
/// zero (the true weight there is below truncation level).
double tanh_sinh(const SingularIntegrand& fn, double a, double b,
                 double abs_tol, double rel_tol);

} // namespace isolab
