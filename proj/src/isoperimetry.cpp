#include "isolab/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "isolab/format.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

void AnnuliConfig::validate() const {
    if (radii.size() < 2 || radii.size() % 2 != 0)
        throw std::invalid_argument("AnnuliConfig: need an even number of radii (>= 2)");
    for (size_t i = 0; i < radii.size(); ++i) {
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw std::invalid_argument("AnnuliConfig: radii must decrease strictly");
    }
    if (radii.back() < 0.0)
        throw std::invalid_argument("AnnuliConfig: radii must be >= 0");
}

ShapeUnion AnnuliConfig::as_shape_union() const {
    validate();
    ShapeUnion s;
    for (size_t h = 0; h + 1 < radii.size(); h += 2) {
        if (radii[h + 1] == 0.0)
            s.components.push_back(CenteredBall{radii[h]});
        else
            s.components.push_back(Annulus{radii[h + 1], radii[h]});
    }
    return s;
}

AnnuliMeasures annuli_measures(const AnnuliConfig& c, const RadialKernel& k) {
    c.validate();
    AnnuliMeasures m;
    for (size_t h = 0; h + 1 < c.radii.size(); h += 2)
        m.volume += kTwoPi * (k.G(c.radii[h]) - k.G(c.radii[h + 1]));
    for (double r : c.radii)
        if (r > 0.0)
            m.perimeter += kTwoPi * k.g(r);
    return m;
}

std::shared_ptr<RadialKernel> kernel_for_volume(const Density& d, double v, double eps_q) {
    if (!(v > 0.0))
        throw std::invalid_argument("kernel_for_volume: v must be > 0");
    // grow the domain until it holds the ball of volume v, with headroom for
    // competitor radii beyond the ball
    double hi = 1.0;
    auto enough = [&](double r) {
        QuadratureOptions opt;
        opt.abs_tol = 1e-8;
        opt.rel_tol = 1e-8;
        double G = 0.0;
        std::vector<double> cuts{0.0};
        for (double bp : d.breakpoints())
            if (bp < r) cuts.push_back(bp);
        cuts.push_back(r);
        for (size_t i = 0; i + 1 < cuts.size(); ++i)
            G += integrate([&d](double t) { return d.g(t); }, cuts[i], cuts[i + 1], opt);
        return kTwoPi * G >= v;
    };
    int guard = 0;
    while (!enough(hi) && guard++ < 60) hi *= 2.0;
    if (guard >= 60)
        throw std::invalid_argument("kernel_for_volume: volume out of reach");
    return std::make_shared<RadialKernel>(d, 1.6 * hi, eps_q);
}

ProfilePoint profile_value(const RadialKernel& k, double v) {
    if (!(v > 0.0))
        throw std::invalid_argument("profile_value: v must be > 0");
    ProfilePoint p;
    p.v = v;
    p.r = k.Ginv(v / kTwoPi);
    p.value = kTwoPi * k.g(p.r);
    return p;
}

ProfilePoint profile_value(const Density& d, double v, double eps_q) {
    return profile_value(*kernel_for_volume(d, v, eps_q), v);
}

SuperadditivityCheck superadditivity_check(const RadialKernel& k,
                                           const std::vector<double>& t_seq, double tol) {
    if (t_seq.empty())
        throw std::invalid_argument("superadditivity_check: empty sequence");
    double alternating = 0.0;
    for (size_t i = 0; i < t_seq.size(); ++i) {
        if (t_seq[i] < 0.0)
            throw std::invalid_argument("superadditivity_check: entries must be >= 0");
        if (i > 0 && !(t_seq[i] < t_seq[i - 1]))
            throw std::invalid_argument("superadditivity_check: sequence must decrease "
                                        "strictly");
        alternating += (i % 2 == 0 ? 1.0 : -1.0) * t_seq[i];
    }
    SuperadditivityCheck out;
    for (double t : t_seq) out.lhs += k.J(t);
    out.rhs = k.J(alternating);
    out.holds = out.lhs >= out.rhs - tol;
    return out;
}

// ------------------------------------------------------------------ compete

namespace {

// Objective over the free inner radii x = (a1 > a2 > ... > a_{2N+1} >= 0);
// the outermost radius a0 closes the volume constraint through G^{-1}.
struct AnnuliObjective {
    const RadialKernel& k;
    double v;

    // returns perimeter, or +inf when infeasible; fills radii when asked
    double operator()(const std::vector<double>& x, std::vector<double>* radii_out) const {
        const size_t n = x.size();
        for (size_t i = 0; i < n; ++i) {
            if (x[i] < 0.0 || x[i] > k.hi()) return 1e300;
            if (i > 0 && !(x[i] < x[i - 1])) return 1e300;
        }
        double t0 = v / kTwoPi;
        double sign = 1.0;
        for (size_t i = 0; i < n; ++i) {
            t0 += sign * k.G(x[i]);
            sign = -sign;
        }
        if (!(t0 > 0.0) || t0 >= k.G_total()) return 1e300;
        const double a0 = k.Ginv(t0);
        if (!(a0 > x[0])) return 1e300;
        double per = kTwoPi * k.g(a0);
        for (double r : x)
            if (r > 0.0) per += kTwoPi * k.g(r);
        if (radii_out) {
            radii_out->clear();
            radii_out->push_back(a0);
            radii_out->insert(radii_out->end(), x.begin(), x.end());
        }
        return per;
    }
};

// Standard Nelder-Mead with restarts on simplex collapse.
struct NelderMead {
    int max_iter;
    int* iter_count;
    int* restart_count;

    template <typename F>
    std::pair<std::vector<double>, double> run(F&& f, std::vector<double> x0,
                                               double spread, std::mt19937_64& rng) {
        const size_t n = x0.size();
        const double alpha = 1.0, gamma = 2.0, beta = 0.5, delta = 0.5;
        std::vector<std::vector<double>> pts(n + 1, x0);
        std::vector<double> fv(n + 1);
        auto reset_simplex = [&](const std::vector<double>& base) {
            std::uniform_real_distribution<double> jitter(-0.5, 0.5);
            for (size_t i = 0; i <= n; ++i) {
                pts[i] = base;
                if (i > 0)
                    pts[i][i - 1] = std::max(0.0, base[i - 1] + spread * (0.5 + jitter(rng)));
                fv[i] = f(pts[i], nullptr);
            }
        };
        reset_simplex(x0);
        int restarts_left = 3;
        for (int it = 0; it < max_iter; ++it) {
            ++*iter_count;
            // order
            std::vector<size_t> idx(n + 1);
            for (size_t i = 0; i <= n; ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(),
                      [&](size_t a, size_t b) { return fv[a] < fv[b]; });
            const size_t best = idx[0], worst = idx[n], second = idx[n - 1];
            // collapse detection
            double diam = 0.0;
            for (size_t i = 0; i <= n; ++i)
                for (size_t j = 0; j < n; ++j)
                    diam = std::max(diam, std::fabs(pts[i][j] - pts[best][j]));
            if ((diam < 1e-10 || fv[worst] - fv[best] < 1e-13) && fv[best] < 1e299) {
                if (restarts_left-- > 0 && it + 1 < max_iter) {
                    ++*restart_count;
                    spread *= 0.3;
                    reset_simplex(pts[best]);
                    continue;
                }
                break;
            }
            std::vector<double> centroid(n, 0.0);
            for (size_t i = 0; i <= n; ++i)
                if (i != worst)
                    for (size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;
            auto blend = [&](double coef) {
                std::vector<double> p(n);
                for (size_t j = 0; j < n; ++j)
                    p[j] = centroid[j] + coef * (pts[worst][j] - centroid[j]);
                return p;
            };
            auto xr = blend(-alpha);
            const double fr = f(xr, nullptr);
            if (fr < fv[best]) {
                auto xe = blend(-gamma);
                const double fe = f(xe, nullptr);
                if (fe < fr) { pts[worst] = xe; fv[worst] = fe; }
                else { pts[worst] = xr; fv[worst] = fr; }
            } else if (fr < fv[second]) {
                pts[worst] = xr; fv[worst] = fr;
            } else {
                auto xc = blend(fr < fv[worst] ? -beta : beta);
                const double fc = f(xc, nullptr);
                if (fc < std::min(fr, fv[worst])) { pts[worst] = xc; fv[worst] = fc; }
                else {
                    for (size_t i = 0; i <= n; ++i) {
                        if (i == best) continue;
                        for (size_t j = 0; j < n; ++j)
                            pts[i][j] = pts[best][j] + delta * (pts[i][j] - pts[best][j]);
                        fv[i] = f(pts[i], nullptr);
                    }
                }
            }
        }
        size_t best = 0;
        for (size_t i = 1; i <= n; ++i)
            if (fv[i] < fv[best]) best = i;
        return {pts[best], fv[best]};
    }
};

} // namespace

CompetitionResult compete(const Density& d, double v, int annuli, int trials,
                          std::uint64_t seed, double eps_q,
                          std::vector<CompeteTracePoint>* trace) {
    if (annuli < 1) throw std::invalid_argument("compete: need N >= 1");
    if (trials < 1) throw std::invalid_argument("compete: need trials >= 1");
    auto kernel = kernel_for_volume(d, v, eps_q);
    const RadialKernel& k = *kernel;

    CompetitionResult result;
    result.v = v;
    result.seed = seed;
    result.trials = trials;
    const ProfilePoint ball = profile_value(k, v);
    result.ball_radius = ball.r;
    result.ball_perimeter = ball.value;

    AnnuliObjective objective{k, v};
    std::mt19937_64 rng(seed);
    const size_t dim = 2 * annuli + 1;
    double best_val = 1e300;
    std::vector<double> best_x;

    for (int trial = 0; trial < trials; ++trial) {
        // seeded feasible start: decreasing radii below a sampled roof
        std::vector<double> x0(dim);
        bool feasible = false;
        for (int attempt = 0; attempt < 100 && !feasible; ++attempt) {
            std::uniform_real_distribution<double> u01(0.05, 0.95);
            const double roof = ball.r * (0.4 + 1.2 * u01(rng));
            std::vector<double> draw(dim);
            for (auto& t : draw) t = roof * u01(rng);
            std::sort(draw.rbegin(), draw.rend());
            feasible = objective(draw, nullptr) < 1e299;
            if (feasible) x0 = draw;
        }
        if (!feasible)
            throw std::runtime_error("compete: no feasible start found (volume too "
                                     "large for the sampled radii)");
        NelderMead nm{200 * annuli, &result.total_iterations, &result.restarts};
        auto [x, val] = nm.run(objective, x0, 0.15 * ball.r, rng);
        if (trace)
            trace->push_back({trial, result.total_iterations, val});
        if (val < best_val) {
            best_val = val;
            best_x = x;
        }
    }
    std::vector<double> radii;
    objective(best_x, &radii);
    // greedy annulus shedding: a near-degenerate annulus still pays its full
    // perimeter, a discrete move the simplex cannot make; dropping a pair and
    // re-solving the outermost radius from the constraint can only help
    bool improved = true;
    while (improved) {
        improved = false;
        for (size_t h = 0; h + 1 < radii.size() && radii.size() > 2; h += 2) {
            std::vector<double> remaining;
            for (size_t i = 0; i < radii.size(); ++i)
                if (i != h && i != h + 1) remaining.push_back(radii[i]);
            const std::vector<double> free(remaining.begin() + 1, remaining.end());
            std::vector<double> candidate;
            const double val = objective(free, &candidate);
            if (val < best_val - 1e-12) {
                best_val = val;
                radii = candidate;
                improved = true;
                break;
            }
        }
        // boundary projection: the innermost radius may belong exactly at 0,
        // which the simplex only approaches asymptotically
        if (!improved && radii.size() >= 2 && radii.back() > 0.0) {
            std::vector<double> free(radii.begin() + 1, radii.end());
            free.back() = 0.0;
            std::vector<double> candidate;
            const double val = objective(free, &candidate);
            if (val < best_val - 1e-15) {
                best_val = val;
                radii = candidate;
                improved = true;
            }
        }
    }
    result.best.radii = radii;
    result.best_perimeter = best_val;
    result.gap = best_val - result.ball_perimeter;
    return result;
}

std::string CompetitionResult::json() const {
    std::ostringstream o;
    o << "{\"v\":" << format_double(v) << ",\"r\":" << format_double(ball_radius)
      << ",\"I_f\":" << format_double(ball_perimeter)
      << ",\"best_perimeter\":" << format_double(best_perimeter)
      << ",\"gap\":" << format_double(gap) << ",\"best_radii\":[";
    for (size_t i = 0; i < best.radii.size(); ++i) {
        if (i) o << ',';
        o << format_double(best.radii[i]);
    }
    o << "],\"seed\":" << seed << ",\"trials\":" << trials
      << ",\"iterations\":" << total_iterations << ",\"restarts\":" << restarts << "}";
    return o.str();
}

// --------------------------------------------------------- uniqueness probe

namespace {

// Off-centre ball of prescribed weighted volume: radius solved by bisection.
OffCenterBall ball_of_volume(const Density& d, double center, double v, double r_hint) {
    double lo = 0.25 * r_hint, hi = 4.0 * r_hint;
    auto vol = [&](double r) {
        return weighted_volume(ShapeUnion{{OffCenterBall{center, 0.0, r}}, false}, d);
    };
    while (vol(lo) > v) lo *= 0.5;
    while (vol(hi) < v) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * r_hint; ++it) {
        const double mid = 0.5 * (lo + hi);
        (vol(mid) < v ? lo : hi) = mid;
    }
    return OffCenterBall{center, 0.0, 0.5 * (lo + hi)};
}

} // namespace

UniquenessProbe uniqueness_probe(const Density& d, double v, double eps_q) {
    auto R_opt = d.plateau_radius();
    if (!R_opt || !(*R_opt > 0.0))
        throw std::invalid_argument("uniqueness_probe: density needs a finite plateau "
                                    "radius R > 0 (rho = 0 on [0, R])");
    const double R = *R_opt;
    auto kernel = kernel_for_volume(d, std::max(v, 4.0 * kTwoPi * 0.5 * R * R), eps_q);
    const RadialKernel& k = *kernel;

    UniquenessProbe probe;
    probe.R = R;
    probe.v0_lebesgue = 3.141592653589793 * R * R;
    probe.v0_weighted = kTwoPi * k.G(R);

    const ProfilePoint ball = profile_value(k, v);
    probe.centered_perimeter = ball.value;
    probe.candidates.push_back({"centered", 0.0, ball.r, v, ball.value, 0.0});

    auto add_candidate = [&](const std::string& kind, double center) {
        OffCenterBall b = ball_of_volume(d, center, v, ball.r);
        ShapeUnion s{{b}, false};
        UniquenessProbe::Candidate c;
        c.kind = kind;
        c.center = center;
        c.radius = b.r;
        c.volume = weighted_volume(s, d);
        c.perimeter = weighted_perimeter(s, d);
        c.gap = c.perimeter - ball.value;
        probe.candidates.push_back(c);
        return c;
    };

    if (v <= probe.v0_weighted) {
        // equal-volume balls inside the plateau tie with the centred ball
        double worst_tie = 0.0;
        for (double frac : {0.5, 1.0}) {
            const double center = frac * (R - ball.r);
            if (center <= 0.0) continue;
            auto c = add_candidate("inside", center);
            worst_tie = std::max(worst_tie, std::fabs(c.gap));
        }
        probe.tie_inside = worst_tie <= 1e-9 * std::max(1.0, ball.value);
        // a protruding ball loses strictly
        auto cp = add_candidate("protruding", R - 0.25 * ball.r);
        probe.protruding_strict = cp.gap > 1e-4;
    } else {
        // beyond the plateau volume every off-centre candidate loses strictly
        double worst = 1e300;
        for (double center : {0.2 * ball.r, 0.5 * ball.r}) {
            auto c = add_candidate("beyond", center);
            worst = std::min(worst, c.gap);
        }
        probe.protruding_strict = worst > 1e-4;
        probe.tie_inside = true;                 // vacuous in this regime
    }
    return probe;
}

std::string UniquenessProbe::json() const {
    std::ostringstream o;
    o << "{\"R\":" << format_double(R) << ",\"v0_lebesgue\":" << format_double(v0_lebesgue)
      << ",\"v0_weighted\":" << format_double(v0_weighted)
      << ",\"centered_perimeter\":" << format_double(centered_perimeter)
      << ",\"tie_inside\":" << (tie_inside ? "true" : "false")
      << ",\"protruding_strict\":" << (protruding_strict ? "true" : "false")
      << ",\"candidates\":[";
    for (size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        if (i) o << ',';
        o << "{\"kind\":\"" << c.kind << "\",\"center\":" << format_double(c.center)
          << ",\"radius\":" << format_double(c.radius)
          << ",\"volume\":" << format_double(c.volume)
          << ",\"perimeter\":" << format_double(c.perimeter)
          << ",\"gap\":" << format_double(c.gap) << "}";
    }
    o << "]}";
    return o.str();
}

} // namespace isolab
