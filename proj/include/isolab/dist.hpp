#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isolab/bvp.hpp"
#include "isolab/means.hpp"

namespace isolab {

/// Measure of a disjoint union of intervals in (0, inf) under dx/x.
struct LevelInterval {
    double lo = 0.0, hi = 0.0;
};
double mu_measure(const std::vector<LevelInterval>& intervals);

/// Distribution function t -> mu({fn > t}) of a piecewise-smooth function on
/// [lo, hi] > 0 (or [0, hi] when fn(0) is below every threshold), with the
/// super-level interval decomposition cached per threshold.
class DistFunction {
public:
    DistFunction(const PanelFunction& fn, std::vector<double> thresholds);

    const std::vector<double>& thresholds() const { return thr_; }
    const std::vector<double>& values() const { return val_; }
    const std::vector<std::vector<LevelInterval>>& level_sets() const { return sets_; }
    double value(size_t i) const { return val_[i]; }
    size_t size() const { return thr_.size(); }

private:
    std::vector<double> thr_, val_;
    std::vector<std::vector<LevelInterval>> sets_;
};

/// Integrand shapes for the weighted integrals: phi composed with a solution,
/// integrated against dx/x. The canonical singular shapes carry the exact
/// square-root asymptotics used near the endpoints where the solution hits
/// the singular level.
struct Integrand {
    enum class Shape { odd_increasing, decreasing_singular, smooth };
    Shape shape = Shape::smooth;
    std::function<double(double)> phi;
    double singular_level = 1.0;       // |t| -> 1 (odd) or t -> 1+ (decreasing)
    double sqrt_coefficient = 0.0;     // phi(level -+ e) ~ sqrt_coefficient / sqrt(e)

    static Integrand odd_sqrt();       // t / sqrt(1 - t^2)
    static Integrand decreasing_sqrt();// 1 / sqrt(t^2 - 1)
    static Integrand smooth_fn(std::function<double(double)> phi);
};

/// Integral of phi(fn) dmu over the solution's interval; panel-split with
/// tanh-sinh on panels whose endpoint touches the singular level.
double weighted_integral(const Integrand& phi, const BvpSolution& sol,
                         double tol = 1e-10);
double weighted_integral(const Integrand& phi, const RiccatiSolution& sol,
                         double tol = 1e-10);

/// One comparison statement evaluated on a threshold grid.
struct ComparisonReport {
    std::string statement_id;
    std::vector<double> grid;
    std::vector<double> lhs, rhs;
    double max_violation = 0.0;        // max(lhs - rhs), negative when slack everywhere
    std::optional<std::pair<double, double>> strict_window;
    bool equality = false;             // |lhs - rhs| <= tol on the whole grid
    int skipped_cells = 0;
    bool hypothesis_ok = true;
    std::string hypothesis_note;
    bool passed = false;
    double tol = 0.0;

    std::string csv() const;           // one row per grid threshold
    std::string json_summary() const;
};

/// Distribution comparison for the sign-changing solution: mu_u <= mu_v on a
/// grid in (0, 1), with the strictness window when the coefficient is not 0.
ComparisonReport compare_linear(const RhoFunction& rho, double tol,
                                int grid_n = 512, double eps_q = 1e-10);

/// The three Riccati comparisons: distribution domination, sup-norm bound and
/// the differential inequality for -mu_w'.
struct RiccatiComparison {
    ComparisonReport dist;             // mu_w <= mu_w0 on (1, T)
    InequalityCheck sup_norm;          // sup w <= sup w0
    ComparisonReport slope;            // -mu_w' >= (2/t) coth(mu_w / 2)
    bool hypothesis_ok = true;
    std::string hypothesis_note;
};
RiccatiComparison compare_riccati(const RhoFunction& rho, double tol,
                                  int grid_n = 512, double eps_q = 1e-10);

/// Closed-form reference quantities for the zero-coefficient solutions.
double w0_value(double a, double b, double tau);        // 2 A tau / (G^2 + tau^2)
double w0_sup(double a, double b);                      // A / G
double z0_value(double a, double b, double t);          // distribution of w0 on [1, A/G)
double u0_distribution(double a, double b, double t);   // distribution of the (1,-1) solution
PanelFunction w0_panel_function(double a, double b);

/// Hypothesis scans (pure helpers, also used by the suites).
bool linear_hypothesis_holds(const BvpSolution& sol, std::string* note = nullptr);
bool riccati_hypothesis_holds(const RiccatiSolution& sol, std::string* note = nullptr);

} // namespace isolab
