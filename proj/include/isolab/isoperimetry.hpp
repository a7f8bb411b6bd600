#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "isolab/density.hpp"
#include "isolab/geometry.hpp"
#include "isolab/kernel.hpp"

namespace isolab {

/// Union of centred annuli given by strictly decreasing radii
/// a0 > a1 > ... > a_{2N+1} >= 0; the set is the union of A(a_{2h+1}, a_{2h}).
struct AnnuliConfig {
    std::vector<double> radii;          // even length, strictly decreasing

    void validate() const;
    ShapeUnion as_shape_union() const;
};

/// Exact weighted volume and perimeter of an annuli configuration.
struct AnnuliMeasures {
    double volume = 0.0;
    double perimeter = 0.0;
};
AnnuliMeasures annuli_measures(const AnnuliConfig& c, const RadialKernel& k);

/// Isoperimetric profile point: ball radius and perimeter at weighted volume v.
struct ProfilePoint {
    double v = 0.0;
    double r = 0.0;
    double value = 0.0;                 // 2 pi g(r) = 2 pi J(v / 2 pi)
};
ProfilePoint profile_value(const Density& d, double v, double eps_q = 1e-10);
ProfilePoint profile_value(const RadialKernel& k, double v);

/// Kernel over [0, hi] with hi large enough that G(hi) >= v / 2 pi.
std::shared_ptr<RadialKernel> kernel_for_volume(const Density& d, double v,
                                                double eps_q = 1e-10);

/// lhs = sum J(t_h), rhs = J(alternating sum); holds iff lhs >= rhs - tol.
struct SuperadditivityCheck {
    double lhs = 0.0, rhs = 0.0;
    bool holds = false;
};
SuperadditivityCheck superadditivity_check(const RadialKernel& k,
                                           const std::vector<double>& t_seq,
                                           double tol = 1e-9);

/// Result of the competitor search at fixed weighted volume.
struct CompetitionResult {
    double v = 0.0;
    double ball_radius = 0.0;
    double ball_perimeter = 0.0;        // the profile value I_f(v)
    AnnuliConfig best;
    double best_perimeter = 0.0;
    double gap = 0.0;                   // best_perimeter - ball_perimeter
    std::uint64_t seed = 0;
    int trials = 0;
    int total_iterations = 0;
    int restarts = 0;

    std::string json() const;
};

struct CompeteTracePoint {
    int trial = 0;
    int iteration = 0;
    double best_perimeter = 0.0;
};

/// Multi-start Nelder-Mead over annuli radii at fixed weighted volume: the
/// inner radii are free, the outermost solves the volume constraint through
/// G^{-1}, so every evaluated configuration satisfies it by construction.
CompetitionResult compete(const Density& d, double v, int annuli, int trials,
                          std::uint64_t seed, double eps_q = 1e-10,
                          std::vector<CompeteTracePoint>* trace = nullptr);

/// Uniqueness probe for densities with an initial plateau (rho = 0 on [0, R]):
/// inside the plateau equal-volume balls tie; protruding or beyond-plateau
/// off-centre balls lose strictly.
struct UniquenessProbe {
    double R = 0.0;
    double v0_lebesgue = 0.0;           // pi R^2
    double v0_weighted = 0.0;           // 2 pi G(R) = e^{h0} pi R^2
    struct Candidate {
        std::string kind;               // "centered", "inside", "protruding", "beyond"
        double center = 0.0;            // distance of the centre from the origin
        double radius = 0.0;
        double volume = 0.0;
        double perimeter = 0.0;
        double gap = 0.0;               // perimeter - centered perimeter
    };
    std::vector<Candidate> candidates;
    double centered_perimeter = 0.0;
    bool tie_inside = false;            // |gap| small for inside candidates
    bool protruding_strict = false;     // gap > strict threshold for protruding
    std::string json() const;
};
UniquenessProbe uniqueness_probe(const Density& d, double v, double eps_q = 1e-10);

} // namespace isolab
