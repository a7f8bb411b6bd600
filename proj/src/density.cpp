#include "isolab/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "isolab/format.hpp"

namespace isolab {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

// ---------------------------------------------------------------- Density

Density::Density(Family fam, std::vector<double> params, double h0)
    : family_(fam), params_(std::move(params)), h0_(h0) {}

Density Density::constant(double level) {
    return Density(Family::constant, {}, level);
}

Density Density::linear(double slope, double h0) {
    require(slope >= 0.0, "Density::linear: slope must be >= 0");
    return Density(Family::linear, {slope}, h0);
}

Density Density::power(double coeff, double exponent, double h0) {
    require(coeff >= 0.0, "Density::power: coefficient must be >= 0");
    require(exponent >= 1.0, "Density::power: exponent must be >= 1");
    return Density(Family::power, {coeff, exponent}, h0);
}

Density Density::piecewise_linear(std::vector<double> breaks,
                                  std::vector<double> slopes, double h0) {
    require(!breaks.empty() && breaks.size() == slopes.size(),
            "Density::piecewise_linear: need equally many breakpoints and slopes");
    require(breaks.front() == 0.0, "Density::piecewise_linear: first breakpoint must be 0");
    for (size_t i = 0; i < breaks.size(); ++i) {
        if (i > 0)
            require(breaks[i] > breaks[i - 1],
                    "Density::piecewise_linear: breakpoints must increase strictly");
        require(slopes[i] >= 0.0, "Density::piecewise_linear: slopes must be >= 0");
        if (i > 0)
            require(slopes[i] >= slopes[i - 1],
                    "Density::piecewise_linear: slopes must be non-decreasing");
    }
    std::vector<double> params;
    for (size_t i = 0; i < breaks.size(); ++i) {
        params.push_back(breaks[i]);
        params.push_back(slopes[i]);
    }
    return Density(Family::piecewise_linear, std::move(params), h0);
}

double Density::h(double t) const {
    require(t >= 0.0, "Density::h: t must be >= 0");
    switch (family_) {
    case Family::constant: return h0_;
    case Family::linear:   return h0_ + params_[0] * t;
    case Family::power:    return h0_ + params_[0] * std::pow(t, params_[1]);
    case Family::piecewise_linear: {
        double acc = h0_;
        const size_t n = params_.size() / 2;
        for (size_t i = 0; i < n; ++i) {
            const double lo = params_[2 * i];
            const double hi = (i + 1 < n) ? params_[2 * i + 2] : t;
            if (t <= lo) break;
            acc += params_[2 * i + 1] * (std::min(t, hi) - lo);
        }
        return acc;
    }
    }
    return h0_;
}

double Density::f(double t) const { return std::exp(h(t)); }
double Density::g(double t) const { return t * f(t); }

double Density::rho(double t, Side side) const {
    require(t >= 0.0, "Density::rho: t must be >= 0");
    if (t == 0.0 && side != Side::right)
        throw std::invalid_argument("Density::rho: left limit requested at t = 0");
    switch (family_) {
    case Family::constant: return 0.0;
    case Family::linear:   return params_[0];
    case Family::power: {
        const double c = params_[0], p = params_[1];
        return c * p * std::pow(t, p - 1.0);
    }
    case Family::piecewise_linear: {
        const size_t n = params_.size() / 2;
        auto slope_at = [&](double x, bool from_left) {
            // active slope on the segment containing x (open to the chosen side)
            size_t seg = 0;
            for (size_t i = 0; i < n; ++i) {
                const double bp = params_[2 * i];
                if (from_left ? (bp < x) : (bp <= x)) seg = i;
            }
            return params_[2 * seg + 1];
        };
        switch (side) {
        case Side::left:  return slope_at(t, true);
        case Side::right: return slope_at(t, false);
        case Side::mean:  return 0.5 * (slope_at(t, true) + slope_at(t, false));
        }
        break;
    }
    }
    return 0.0;
}

std::optional<double> Density::plateau_radius() const {
    switch (family_) {
    case Family::constant: return std::nullopt;
    case Family::linear:   return params_[0] > 0.0 ? std::optional<double>(0.0) : std::nullopt;
    case Family::power:    return params_[0] > 0.0 ? std::optional<double>(0.0) : std::nullopt;
    case Family::piecewise_linear: {
        const size_t n = params_.size() / 2;
        for (size_t i = 0; i < n; ++i)
            if (params_[2 * i + 1] > 0.0)
                return params_[2 * i];
        return std::nullopt;
    }
    }
    return std::nullopt;
}

std::vector<double> Density::breakpoints() const {
    std::vector<double> out;
    if (family_ == Family::piecewise_linear) {
        const size_t n = params_.size() / 2;
        for (size_t i = 1; i < n; ++i)
            out.push_back(params_[2 * i]);
    }
    return out;
}

// ------------------------------------------------------------ RhoFunction

RhoFunction::RhoFunction(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {
    require(a >= 0.0 && a < b, "RhoFunction: domain must satisfy 0 <= a < b");
}

RhoFunction RhoFunction::constant(double level, double a, double b) {
    require(level >= 0.0, "RhoFunction::constant: level must be >= 0");
    RhoFunction r(Kind::constant, a, b);
    r.c0_ = level;
    return r;
}

RhoFunction RhoFunction::affine(double value_at_a, double slope, double a, double b) {
    require(value_at_a >= 0.0, "RhoFunction::affine: value at a must be >= 0");
    require(slope >= 0.0, "RhoFunction::affine: slope must be >= 0 (non-decreasing)");
    RhoFunction r(Kind::affine, a, b);
    r.c0_ = value_at_a;
    r.c1_ = slope;
    return r;
}

RhoFunction RhoFunction::step(std::vector<double> jumps, std::vector<double> levels,
                              double a, double b) {
    require(levels.size() == jumps.size() + 1,
            "RhoFunction::step: need one more level than jump points");
    for (size_t i = 0; i < jumps.size(); ++i) {
        require(jumps[i] > a && jumps[i] < b, "RhoFunction::step: jumps must lie in (a, b)");
        if (i > 0) require(jumps[i] > jumps[i - 1], "RhoFunction::step: jumps must increase");
    }
    for (size_t i = 0; i < levels.size(); ++i) {
        require(levels[i] >= 0.0, "RhoFunction::step: levels must be >= 0");
        if (i > 0) require(levels[i] >= levels[i - 1],
                           "RhoFunction::step: levels must be non-decreasing");
    }
    RhoFunction r(Kind::step, a, b);
    r.jumps_ = std::move(jumps);
    r.levels_ = std::move(levels);
    return r;
}

double RhoFunction::left(double x) const {
    require(x > a_ && x <= b_, "RhoFunction::left: x must lie in (a, b]");
    switch (kind_) {
    case Kind::constant: return c0_;
    case Kind::affine:   return c0_ + c1_ * (x - a_);
    case Kind::step: {
        size_t idx = std::lower_bound(jumps_.begin(), jumps_.end(), x) - jumps_.begin();
        return levels_[idx];   // value on [jumps_[idx-1], x) side
    }
    }
    return 0.0;
}

double RhoFunction::right(double x) const {
    require(x >= a_ && x < b_, "RhoFunction::right: x must lie in [a, b)");
    switch (kind_) {
    case Kind::constant: return c0_;
    case Kind::affine:   return c0_ + c1_ * (x - a_);
    case Kind::step: {
        size_t idx = std::upper_bound(jumps_.begin(), jumps_.end(), x) - jumps_.begin();
        return levels_[idx];
    }
    }
    return 0.0;
}

double RhoFunction::mean(double x) const {
    if (x <= a_) return right(a_);
    if (x >= b_) return left(b_);
    return 0.5 * (left(x) + right(x));
}

double RhoFunction::sup() const { return left(b_); }

bool RhoFunction::is_zero(double tol) const { return sup() <= tol; }

std::vector<double> RhoFunction::panels() const {
    std::vector<double> p{a_};
    p.insert(p.end(), jumps_.begin(), jumps_.end());
    p.push_back(b_);
    return p;
}

double RhoFunction::primitive(double x) const {
    require(x >= a_ && x <= b_, "RhoFunction::primitive: x outside domain");
    switch (kind_) {
    case Kind::constant: return c0_ * (x - a_);
    case Kind::affine:   return c0_ * (x - a_) + 0.5 * c1_ * (x - a_) * (x - a_);
    case Kind::step: {
        double acc = 0.0, lo = a_;
        const size_t k = std::lower_bound(jumps_.begin(), jumps_.end(), x) - jumps_.begin();
        for (size_t i = 0; i < k; ++i) {
            acc += levels_[i] * (jumps_[i] - lo);
            lo = jumps_[i];
        }
        acc += levels_[k] * (x - lo);
        return acc;
    }
    }
    return 0.0;
}

RhoFunction RhoFunction::restrict(double lo, double hi) const {
    require(lo >= a_ && hi <= b_ && lo < hi, "RhoFunction::restrict: bad subinterval");
    switch (kind_) {
    case Kind::constant: return constant(c0_, lo, hi);
    case Kind::affine:   return affine(c0_ + c1_ * (lo - a_), c1_, lo, hi);
    case Kind::step: {
        std::vector<double> js, ls;
        ls.push_back(right(lo));
        for (size_t i = 0; i < jumps_.size(); ++i)
            if (jumps_[i] > lo && jumps_[i] < hi) {
                js.push_back(jumps_[i]);
                ls.push_back(levels_[i + 1]);
            }
        return step(std::move(js), std::move(ls), lo, hi);
    }
    }
    throw std::logic_error("RhoFunction::restrict: unreachable");
}

// -------------------------------------------------------------- eval_rho

double eval_rho(const Density& d, double x, Side side) {
    if (x < 0.0) throw std::invalid_argument("eval_rho: x must be >= 0");
    return d.rho(x, side);
}

double eval_rho(const RhoFunction& r, double x, Side side) {
    switch (side) {
    case Side::left:  return r.left(x);
    case Side::right: return r.right(x);
    case Side::mean:  return r.mean(x);
    }
    return 0.0;
}

RhoFunction density_slope_restriction(const Density& d, double a, double b) {
    switch (d.family()) {
    case Density::Family::constant:
        return RhoFunction::constant(0.0, a, b);
    case Density::Family::linear:
        return RhoFunction::constant(d.params()[0], a, b);
    case Density::Family::power:
        throw std::invalid_argument(
            "density_slope_restriction: power-family slope is not representable "
            "as a constant/affine/step coefficient");
    case Density::Family::piecewise_linear: {
        std::vector<double> js, ls;
        ls.push_back(d.rho(a, Side::right));
        for (double bp : d.breakpoints())
            if (bp > a && bp < b) {
                js.push_back(bp);
                ls.push_back(d.rho(bp, Side::right));
            }
        return RhoFunction::step(std::move(js), std::move(ls), a, b);
    }
    }
    throw std::logic_error("density_slope_restriction: unreachable");
}

// ------------------------------------------------------------- spec files

namespace {

struct SpecLine {
    int number;
    std::string key;
    std::vector<std::string> tokens;
};

std::vector<SpecLine> read_spec_lines(std::istream& in) {
    std::vector<SpecLine> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        SpecLine sl{number, key, {}};
        std::string tok;
        while (ls >> tok) sl.tokens.push_back(tok);
        out.push_back(std::move(sl));
    }
    return out;
}

double parse_number(const SpecLine& sl, const std::string& tok, const std::string& origin) {
    try {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(origin + ":" + std::to_string(sl.number) +
                                    ": key '" + sl.key + "': malformed number '" + tok + "'");
    }
}

} // namespace

Density Density::parse(std::istream& in, const std::string& origin) {
    std::string family;
    std::vector<double> params;
    double h0 = 0.0;
    bool have_family = false, have_h0 = false;
    for (const auto& sl : read_spec_lines(in)) {
        if (sl.key == "family") {
            if (sl.tokens.size() != 1)
                throw std::invalid_argument(origin + ":" + std::to_string(sl.number) +
                                            ": key 'family': expected one value");
            family = sl.tokens[0];
            have_family = true;
        } else if (sl.key == "params") {
            for (const auto& t : sl.tokens) params.push_back(parse_number(sl, t, origin));
        } else if (sl.key == "h0") {
            if (sl.tokens.size() != 1)
                throw std::invalid_argument(origin + ":" + std::to_string(sl.number) +
                                            ": key 'h0': expected one value");
            h0 = parse_number(sl, sl.tokens[0], origin);
            have_h0 = true;
        } else {
            throw std::invalid_argument(origin + ":" + std::to_string(sl.number) +
                                        ": unknown key '" + sl.key + "'");
        }
    }
    if (!have_family)
        throw std::invalid_argument(origin + ": missing key 'family'");
    if (family == "constant") {
        if (params.size() > 1)
            throw std::invalid_argument(origin + ": key 'params': constant family takes "
                                        "at most one value");
        double level = params.empty() ? 0.0 : params[0];
        if (have_h0 && !params.empty() && level != h0)
            throw std::invalid_argument(origin + ": constant level and h0 disagree");
        return constant(have_h0 && params.empty() ? h0 : level);
    }
    if (family == "linear") {
        if (params.size() != 1)
            throw std::invalid_argument(origin + ": key 'params': linear family takes "
                                        "exactly one slope");
        return linear(params[0], h0);
    }
    if (family == "power") {
        if (params.size() != 2)
            throw std::invalid_argument(origin + ": key 'params': power family takes "
                                        "coefficient and exponent");
        return power(params[0], params[1], h0);
    }
    if (family == "piecewise-linear") {
        if (params.size() < 2 || params.size() % 2 != 0)
            throw std::invalid_argument(origin + ": key 'params': piecewise-linear family "
                                        "takes breakpoint/slope pairs");
        std::vector<double> breaks, slopes;
        for (size_t i = 0; i < params.size(); i += 2) {
            breaks.push_back(params[i]);
            slopes.push_back(params[i + 1]);
        }
        return piecewise_linear(std::move(breaks), std::move(slopes), h0);
    }
    throw std::invalid_argument(origin + ": key 'family': unknown family '" + family + "'");
}

Density Density::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("Density::load: cannot open '" + path + "'");
    return parse(in, path);
}

std::string Density::to_spec() const {
    std::ostringstream out;
    switch (family_) {
    case Family::constant: out << "family constant\n"; break;
    case Family::linear:   out << "family linear\n"; break;
    case Family::power:    out << "family power\n"; break;
    case Family::piecewise_linear: out << "family piecewise-linear\n"; break;
    }
    if (!params_.empty()) {
        out << "params";
        for (double p : params_) out << ' ' << format_double(p);
        out << '\n';
    }
    out << "h0 " << format_double(h0_) << '\n';
    return out.str();
}

RhoFunction RhoFunction::parse(std::istream& in, const std::string& origin) {
    std::string kind;
    std::vector<double> params;
    double a = 0.0, b = 0.0;
    bool have_kind = false, have_a = false, have_b = false;
    for (const auto& sl : read_spec_lines(in)) {
        if (sl.key == "kind") {
            kind = sl.tokens.at(0);
            have_kind = true;
        } else if (sl.key == "a") {
            a = parse_number(sl, sl.tokens.at(0), origin);
            have_a = true;
        } else if (sl.key == "b") {
            b = parse_number(sl, sl.tokens.at(0), origin);
            have_b = true;
        } else if (sl.key == "params") {
            for (const auto& t : sl.tokens) params.push_back(parse_number(sl, t, origin));
        } else {
            throw std::invalid_argument(origin + ":" + std::to_string(sl.number) +
                                        ": unknown key '" + sl.key + "'");
        }
    }
    if (!have_kind || !have_a || !have_b)
        throw std::invalid_argument(origin + ": rho spec needs keys kind, a, b");
    if (kind == "constant") {
        if (params.size() != 1)
            throw std::invalid_argument(origin + ": constant rho takes one level");
        return constant(params[0], a, b);
    }
    if (kind == "affine") {
        if (params.size() != 2)
            throw std::invalid_argument(origin + ": affine rho takes value and slope");
        return affine(params[0], params[1], a, b);
    }
    if (kind == "step") {
        if (params.empty() || params.size() % 2 == 0)
            throw std::invalid_argument(origin + ": step rho takes level0 then "
                                        "jump/level pairs");
        std::vector<double> js, ls{params[0]};
        for (size_t i = 1; i < params.size(); i += 2) {
            js.push_back(params[i]);
            ls.push_back(params[i + 1]);
        }
        return step(std::move(js), std::move(ls), a, b);
    }
    throw std::invalid_argument(origin + ": unknown rho kind '" + kind + "'");
}

RhoFunction RhoFunction::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("RhoFunction::load: cannot open '" + path + "'");
    return parse(in, path);
}

std::string RhoFunction::to_spec() const {
    std::ostringstream out;
    switch (kind_) {
    case Kind::constant:
        out << "kind constant\nparams " << format_double(c0_) << '\n';
        break;
    case Kind::affine:
        out << "kind affine\nparams " << format_double(c0_) << ' ' << format_double(c1_) << '\n';
        break;
    case Kind::step:
        out << "kind step\nparams " << format_double(levels_[0]);
        for (size_t i = 0; i < jumps_.size(); ++i)
            out << ' ' << format_double(jumps_[i]) << ' ' << format_double(levels_[i + 1]);
        out << '\n';
        break;
    }
    out << "a " << format_double(a_) << "\nb " << format_double(b_) << '\n';
    return out.str();
}

} // namespace isolab
