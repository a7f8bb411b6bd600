#include "isolab/means.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "isolab/format.hpp"

namespace isolab {

namespace {

void check_interval(const RhoFunction& rho, double a, double b) {
    if (!(a >= 0.0 && a < b))
        throw std::invalid_argument("means: need 0 <= a < b");
    if (a < rho.a() || b > rho.b())
        throw std::invalid_argument("means: [a, b] outside the coefficient domain");
}

RadialKernel make_kernel(const RhoFunction& rho, double a, double b, double eps_q) {
    check_interval(rho, a, b);
    if (a == rho.a() && b == rho.b())
        return RadialKernel(rho, eps_q);
    return RadialKernel(rho.restrict(a, b), eps_q);
}

} // namespace

double compute_m(const RadialKernel& k) {
    const double integral = k.G_total();
    return (k.g(k.hi()) - k.g(k.lo())) / integral;
}

double compute_mhat(const RadialKernel& k) {
    const double integral = k.G_total();
    return (k.g(k.lo()) + k.g(k.hi())) / integral;
}

double compute_m(const RhoFunction& rho, double a, double b, double eps_q) {
    return compute_m(make_kernel(rho, a, b, eps_q));
}

double compute_mhat(const RhoFunction& rho, double a, double b, double eps_q) {
    return compute_mhat(make_kernel(rho, a, b, eps_q));
}

MeansReport verify_interval_means(const RhoFunction& rho, double a, double b,
                                  double tol, double eps_q) {
    if (!(tol > 0.0))
        throw std::invalid_argument("verify_interval_means: tol must be > 0");
    RadialKernel k = make_kernel(rho, a, b, eps_q);
    MeansReport r;
    r.a = a;
    r.b = b;
    r.tol = tol;
    r.m = compute_m(k);
    r.mhat = compute_mhat(k);
    r.m0 = 2.0 / (a + b);
    r.mhat0 = 2.0 / (b - a);
    const double rho_a = rho.right(a);
    const double rho_b = rho.left(b);
    r.bound83 = rho_b + r.m0;
    r.bound85 = 2.0 + a * rho_a + b * rho_b;
    r.rho_identically_zero = rho_b <= tol;   // sup over [a, b] by monotonicity

    auto fill = [tol](InequalityCheck& c, const std::string& id, double lhs, double rhs) {
        c.id = id;
        c.lhs = lhs;
        c.rhs = rhs;
        c.margin = rhs - lhs;
        c.holds = c.margin >= -tol;
        c.equality = std::fabs(c.margin) <= tol;
    };
    fill(r.lem81, "Lem-8.1", r.m0, r.m);               // m0 <= m
    fill(r.thm83, "Thm-8.3-i", r.m, r.bound83);        // m <= rho(b-) + m0
    fill(r.lem84, "Lem-8.4", r.mhat0, r.mhat);         // mhat0 <= mhat
    fill(r.thm85, "Thm-8.5-i", (b - a) * r.mhat, r.bound85);
    return r;
}

std::string MeansReport::csv_header() {
    return "a,b,m,mhat,m0,mhat0,bound83,bound85,margin81,margin83,margin84,margin85,"
           "eq83,eq85,rho_zero,tol\n";
}

std::string MeansReport::csv_row() const {
    return ::isolab::csv_row({format_double(a), format_double(b), format_double(m),
                              format_double(mhat), format_double(m0), format_double(mhat0),
                              format_double(bound83), format_double(bound85),
                              format_double(lem81.margin), format_double(thm83.margin),
                              format_double(lem84.margin), format_double(thm85.margin),
                              thm83.equality ? "1" : "0", thm85.equality ? "1" : "0",
                              rho_identically_zero ? "1" : "0", format_double(tol)});
}

std::string MeansReport::json() const {
    std::ostringstream o;
    o << "{\"a\":" << format_double(a) << ",\"b\":" << format_double(b)
      << ",\"m\":" << format_double(m) << ",\"mhat\":" << format_double(mhat)
      << ",\"m0\":" << format_double(m0) << ",\"mhat0\":" << format_double(mhat0)
      << ",\"bound83\":" << format_double(bound83)
      << ",\"bound85\":" << format_double(bound85)
      << ",\"margins\":{\"Lem-8.1\":" << format_double(lem81.margin)
      << ",\"Thm-8.3-i\":" << format_double(thm83.margin)
      << ",\"Lem-8.4\":" << format_double(lem84.margin)
      << ",\"Thm-8.5-i\":" << format_double(thm85.margin)
      << "},\"equality\":{\"Thm-8.3-ii\":" << (thm83.equality ? "true" : "false")
      << ",\"Thm-8.5-ii\":" << (thm85.equality ? "true" : "false")
      << "},\"rho_zero\":" << (rho_identically_zero ? "true" : "false")
      << ",\"tol\":" << format_double(tol) << "}";
    return o.str();
}

} // namespace isolab
