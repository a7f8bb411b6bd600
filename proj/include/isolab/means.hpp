#pragma once

#include <string>

#include "isolab/density.hpp"
#include "isolab/kernel.hpp"

namespace isolab {

/// One verified inequality: lhs <= rhs with margin = rhs - lhs.
struct InequalityCheck {
    std::string id;
    double lhs = 0.0, rhs = 0.0, margin = 0.0;
    bool holds = false;
    bool equality = false;             // margin within tolerance
};

/// The mean-type ratios of an interval coefficient together with the four
/// inequalities they satisfy and their flat-record serialisation.
struct MeansReport {
    double a = 0.0, b = 0.0;
    double m = 0.0, mhat = 0.0;
    double m0 = 0.0, mhat0 = 0.0;      // 2/(a+b) and 2/(b-a)
    double bound83 = 0.0;              // rho(b-) + 2/(a+b)
    double bound85 = 0.0;              // 2 + a rho(a+) + b rho(b-)
    double tol = 0.0;
    bool rho_identically_zero = false;
    InequalityCheck lem81, thm83, lem84, thm85;

    static std::string csv_header();
    std::string csv_row() const;
    std::string json() const;
};

/// m = (g(b) - g(a)) / integral of g, with the kernel normalised h(a) = 0.
double compute_m(const RhoFunction& rho, double a, double b, double eps_q = 1e-10);
double compute_m(const RadialKernel& k);

/// mhat = (g(a) + g(b)) / integral of g.
double compute_mhat(const RhoFunction& rho, double a, double b, double eps_q = 1e-10);
double compute_mhat(const RadialKernel& k);

/// Evaluate the two direct and two reverse mean inequalities with equality
/// detection at tolerance `tol`.
MeansReport verify_interval_means(const RhoFunction& rho, double a, double b,
                                  double tol = 1e-9, double eps_q = 1e-10);

} // namespace isolab
