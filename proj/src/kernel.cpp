#include "isolab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isolab/quadrature.hpp"

namespace isolab {

RadialKernel::RadialKernel(const Density& d, double x_hi, double eps_q)
    : lo_(0.0), hi_(x_hi), eps_q_(eps_q) {
    if (!(x_hi > 0.0) || !(eps_q > 0.0))
        throw std::invalid_argument("RadialKernel: need x_hi > 0 and eps_q > 0");
    h_ = [d](double x) { return d.h(x); };
    rho_ = [d](double x, Side s) { return d.rho(x, s); };
    panels_ = {lo_};
    for (double bp : d.breakpoints())
        if (bp > lo_ && bp < hi_) panels_.push_back(bp);
    panels_.push_back(hi_);
    build_table();
}

RadialKernel::RadialKernel(const RhoFunction& rho, double eps_q)
    : lo_(rho.a()), hi_(rho.b()), eps_q_(eps_q) {
    if (!(eps_q > 0.0))
        throw std::invalid_argument("RadialKernel: need eps_q > 0");
    h_ = [rho](double x) { return rho.primitive(x); };
    rho_ = [rho](double x, Side s) { return eval_rho(rho, x, s); };
    panels_ = rho.panels();
    build_table();
}

double RadialKernel::f(double x) const {
    if (x < lo_ - 1e-12 * (hi_ - lo_) || x > hi_ + 1e-12 * (hi_ - lo_))
        throw std::invalid_argument("RadialKernel: evaluation outside domain");
    return std::exp(h_(std::clamp(x, lo_, hi_)));
}

void RadialKernel::build_table() {
    // refine each smooth panel into cells short enough for one Kronrod rule
    const double max_len = (hi_ - lo_) / 256.0;
    cells_ = {lo_};
    for (size_t p = 0; p + 1 < panels_.size(); ++p) {
        const double a = panels_[p], b = panels_[p + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_len)));
        for (int i = 1; i <= n; ++i)
            cells_.push_back(a + (b - a) * i / n);
    }
    cum_.assign(cells_.size(), 0.0);
    auto gg = [this](double x) { return g(x); };
    double err_total = 0.0;
    double carry = 0.0;                          // compensated running sum
    double worst_err = 0.0;
    size_t worst_cell = 1;
    for (size_t i = 1; i < cells_.size(); ++i) {
        double err = 0.0;
        double v = gauss_kronrod_15(gg, cells_[i - 1], cells_[i], &err);
        // split stubborn cells in place until the local error is negligible
        int depth = 0;
        while (err > 0.01 * eps_q_ * std::max(1.0, std::fabs(v)) && depth < 30) {
            const double mid = 0.5 * (cells_[i - 1] + cells_[i]);
            cells_.insert(cells_.begin() + i, mid);
            cum_.insert(cum_.begin() + i, 0.0);
            v = gauss_kronrod_15(gg, cells_[i - 1], cells_[i], &err);
            ++depth;
        }
        err_total += err;
        if (err > worst_err) {
            worst_err = err;
            worst_cell = i;
        }
        const double y = v - carry;
        const double t = cum_[i - 1] + y;
        carry = (t - cum_[i - 1]) - y;
        cum_[i] = t;
    }
    if (err_total > eps_q_ * std::max(1.0, cum_.back()))
        throw QuadratureError("RadialKernel: cumulative quadrature failed to converge",
                              cells_[worst_cell - 1], cells_[worst_cell]);
}

double RadialKernel::G(double x) const {
    if (x <= lo_) return 0.0;
    x = std::min(x, hi_);
    const size_t i = std::upper_bound(cells_.begin(), cells_.end(), x) - cells_.begin();
    const size_t c = std::min(i, cells_.size() - 1);   // cell index with cells_[c-1] <= x
    const double base = cells_[c - 1];
    if (x == base) return cum_[c - 1];
    return cum_[c - 1] + gauss_kronrod_15([this](double t) { return g(t); }, base, x);
}

double RadialKernel::Ginv(double s) const {
    if (s <= 0.0) return lo_;
    if (s >= cum_.back()) {
        if (s > cum_.back() * (1.0 + 1e-9) + 10.0 * eps_q_)
            throw std::invalid_argument("RadialKernel::Ginv: value beyond G(hi)");
        return hi_;
    }
    const size_t i = std::upper_bound(cum_.begin(), cum_.end(), s) - cum_.begin();
    double xlo = cells_[i - 1], xhi = cells_[i];
    double slo = cum_[i - 1], shi = cum_[i];
    // linear init, then safeguarded Newton on G(x) - s (derivative g > 0)
    double x = xlo + (xhi - xlo) * (s - slo) / (shi - slo);
    for (int it = 0; it < 80; ++it) {
        const double val = G(x) - s;
        if (val > 0.0) xhi = x; else xlo = x;
        const double deriv = g(x);
        double step = deriv > 0.0 ? val / deriv : 0.0;
        double xn = x - step;
        if (!(xn > xlo && xn < xhi))
            xn = 0.5 * (xlo + xhi);
        if (std::fabs(xn - x) <= 4e-16 * std::max(1.0, std::fabs(x)) ||
            xhi - xlo <= 4e-16 * std::max(1.0, xhi))
            return xn;
        x = xn;
    }
    return x;
}

} // namespace isolab
