#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "isolab/density.hpp"

namespace isolab {

/// Angular arc (lo, hi) in radians within (-pi, pi]; a full ring is the arc
/// (-pi, pi) with width snapped to 2 pi.
struct AngularArc {
    double lo = 0.0, hi = 0.0;
    double width() const { return hi - lo; }
};

/// A planar set described per radius by a union of disjoint angular arcs whose
/// endpoints interpolate linearly between radial nodes. Jumps live at the
/// nodes: each node carries the arc list on its inner (left) and outer (right)
/// side. This is the common geometry behind cap profiles, rings and raster
/// ingests; perimeter and volume have exact panel formulas.
class RingArcSet {
public:
    struct Node {
        double tau = 0.0;
        std::vector<AngularArc> left;      // arcs just inside tau
        std::vector<AngularArc> right;     // arcs just outside tau
    };

    explicit RingArcSet(std::vector<Node> nodes);

    const std::vector<Node>& nodes() const { return nodes_; }
    double inner_radius() const { return nodes_.front().tau; }
    double outer_radius() const { return nodes_.back().tau; }

    /// Total section length L(tau) = tau * (sum of widths), linear in between
    /// nodes; `side` resolves the value at a jump node.
    double section_length(double tau, Side side = Side::right) const;

    double weighted_volume(const Density& d) const;
    double weighted_perimeter(const Density& d) const;

private:
    std::vector<Node> nodes_;
};

/// Spherical-cap-symmetric set: one cap per radius, centred on the positive
/// x-axis, with angular half-width theta2 piecewise linear over the radial
/// grid; jump nodes carry both one-sided values.
class CapProfile {
public:
    struct Node {
        double tau = 0.0;
        double theta_left = 0.0;           // half-width just inside tau
        double theta_right = 0.0;          // half-width just outside tau
    };

    CapProfile(std::vector<Node> nodes);
    static CapProfile from_samples(const std::vector<double>& tau,
                                   const std::vector<double>& theta2);

    const std::vector<Node>& nodes() const { return nodes_; }
    double theta2(double tau, Side side = Side::right) const;
    double section_length(double tau, Side side = Side::right) const;
    /// Nodes where theta2 is discontinuous.
    std::vector<Node> jump_nodes() const;

    RingArcSet arcs() const;

private:
    std::vector<Node> nodes_;
};

/// A finite union of concrete components.
struct CenteredBall { double r; };
struct OffCenterBall { double cx, cy, r; };
struct Annulus { double r_in, r_out; };
using ShapeComponent = std::variant<CenteredBall, OffCenterBall, Annulus, CapProfile>;

struct ShapeUnion {
    std::vector<ShapeComponent> components;
    bool check_disjoint = true;

    static ShapeUnion load(const std::string& path);
    static ShapeUnion parse(std::istream& in, const std::string& origin = "<stream>");
};

double weighted_volume(const ShapeUnion& s, const Density& d);
double weighted_perimeter(const ShapeUnion& s, const Density& d);
double weighted_volume(const CapProfile& p, const Density& d);
double weighted_perimeter(const CapProfile& p, const Density& d);

/// Spherical cap symmetrisation: per-radius section lengths, reassembled as
/// caps centred on the positive x-axis. Volume is preserved; perimeter never
/// increases (up to the documented discretisation bound eps_disc).
struct SymmetrizeResult {
    CapProfile profile;
    double perimeter_before = 0.0;
    double perimeter_after = 0.0;
    double volume_before = 0.0;
    double volume_after = 0.0;
    double eps_disc = 0.0;
};
SymmetrizeResult symmetrize(const ShapeUnion& s, const Density& d, int radial_nodes = 1024);
SymmetrizeResult symmetrize(const RingArcSet& s, const Density& d);
/// Raster ingestion: cells x cells grid on [-half_extent, half_extent]^2,
/// per-ring angular occupancy by centre-of-cell membership.
SymmetrizeResult symmetrize_raster(const std::function<bool(double, double)>& inside,
                                   double half_extent, int cells, const Density& d);

/// Sampled boundary curve with polar kinematics: unit-speed parametrisation,
/// r' = cos sigma and r theta' = sin sigma hold up to discretisation.
struct CurveSample {
    std::vector<double> s, x, y, r, theta, alpha, sigma, curvature;

    static CurveSample from_points(const std::vector<std::pair<double, double>>& pts);
    static CurveSample circle(double radius, int n);
    /// Boundary branch of a smooth cap profile panel, traversed with
    /// decreasing radius (cos sigma < 0 in the upper half-plane).
    static CurveSample from_cap_profile(const CapProfile& p, int samples_per_panel = 64);

    struct IdentityErrors { double unit_speed, radial, angular; };
    IdentityErrors identity_errors() const;
};

/// Per-node transported quantity u = sin(sigma) and generalised curvature
/// k + rho u along the profile boundary.
struct KinematicsNode {
    double tau = 0.0;
    double theta2 = 0.0;
    double dtheta2 = 0.0;              // radial derivative estimate
    double u = 0.0;
    double curvature = 0.0;
    double generalized_curvature = 0.0;
    bool ok = true;                    // false at jump nodes / unresolved slopes
};
std::vector<KinematicsNode> profile_kinematics(const CapProfile& p, const Density& d);

} // namespace isolab
