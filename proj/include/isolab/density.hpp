#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace isolab {

/// Which one-sided limit of the radial log-slope to evaluate.
enum class Side { left, right, mean };

/// Radial log-density profile h: the weight is f(x) = exp(h(|x|)) with h
/// convex and non-decreasing on [0, inf). Immutable after construction;
/// construction rejects parameters that break convexity or monotonicity.
class Density {
public:
    enum class Family { constant, linear, power, piecewise_linear };

    static Density constant(double level);
    static Density linear(double slope, double h0 = 0.0);
    static Density power(double coeff, double exponent, double h0 = 0.0);
    /// breaks[0] must be 0; slopes[i] applies on [breaks[i], breaks[i+1]) and
    /// must be non-negative and non-decreasing.
    static Density piecewise_linear(std::vector<double> breaks,
                                    std::vector<double> slopes, double h0 = 0.0);

    Family family() const { return family_; }
    double h0() const { return h0_; }
    const std::vector<double>& params() const { return params_; }

    double h(double t) const;
    double f(double t) const;
    double g(double t) const;          // g(t) = t * f(t)
    double rho(double t, Side side) const;

    /// inf{rho > 0}; empty when rho vanishes identically (no finite value).
    std::optional<double> plateau_radius() const;

    /// Radii where rho has a jump (piecewise-linear kinks); empty otherwise.
    std::vector<double> breakpoints() const;

    /// Parse the key-value spec file (keys: family, params, h0). Errors carry
    /// the offending line number and key.
    static Density load(const std::string& path);
    static Density parse(std::istream& in, const std::string& origin = "<stream>");
    std::string to_spec() const;

private:
    Density(Family fam, std::vector<double> params, double h0);
    Family family_;
    std::vector<double> params_;       // family-specific, see factories
    double h0_;
};

/// A standalone non-decreasing bounded coefficient on [a, b], 0 <= a < b.
/// This is the coefficient appearing in g' = (1/x + rho) g and in the
/// boundary-value problems; represented exactly as constant, affine or step.
class RhoFunction {
public:
    static RhoFunction constant(double level, double a, double b);
    /// rho(x) = value_at_a + slope * (x - a), slope >= 0, value_at_a >= 0.
    static RhoFunction affine(double value_at_a, double slope, double a, double b);
    /// levels[0] on [a, jumps[0]), levels[i] on [jumps[i-1], jumps[i]), ...
    /// jumps strictly increasing inside (a, b); levels non-negative, non-decreasing.
    static RhoFunction step(std::vector<double> jumps, std::vector<double> levels,
                            double a, double b);

    double a() const { return a_; }
    double b() const { return b_; }

    double left(double x) const;       // rho(x-)
    double right(double x) const;      // rho(x+)
    double mean(double x) const;
    double operator()(double x) const { return mean(x); }

    double sup() const;                // rho(b-)
    bool is_zero(double tol = 0.0) const;

    /// Interior jump points (empty for constant/affine).
    const std::vector<double>& jumps() const { return jumps_; }
    /// Panel boundaries a, interior jumps, b.
    std::vector<double> panels() const;

    /// Primitive of rho with the normalisation h(a) = 0 (closed form).
    double primitive(double x) const;

    /// Restriction to [lo, hi] within [a, b].
    RhoFunction restrict(double lo, double hi) const;

    enum class Kind { constant, affine, step };
    Kind kind() const { return kind_; }

    static RhoFunction load(const std::string& path);
    static RhoFunction parse(std::istream& in, const std::string& origin = "<stream>");
    std::string to_spec() const;

private:
    RhoFunction(Kind kind, double a, double b);
    Kind kind_;
    double a_, b_;
    double c0_ = 0.0, c1_ = 0.0;       // constant/affine coefficients
    std::vector<double> jumps_;        // step representation
    std::vector<double> levels_;
};

/// Restrict a Density's radial log-slope to [a, b] as an exact RhoFunction.
/// Throws for the power family, whose slope is not constant/affine/step.
RhoFunction density_slope_restriction(const Density& d, double a, double b);

/// Evaluate a one-sided slope of either coefficient source (module operation
/// shared by Density and RhoFunction).
double eval_rho(const Density& d, double x, Side side);
double eval_rho(const RhoFunction& r, double x, Side side);

} // namespace isolab
