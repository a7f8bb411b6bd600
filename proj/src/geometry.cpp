#include "isolab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "isolab/format.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kFullSnap = 1e-12;            // width >= 2 pi - snap counts as full ring

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double set_measure(const std::vector<AngularArc>& A) {
    double m = 0.0;
    for (const auto& a : A) m += a.width();
    return m;
}

double intersection_measure(const std::vector<AngularArc>& A,
                            const std::vector<AngularArc>& B) {
    double m = 0.0;
    size_t i = 0, j = 0;
    while (i < A.size() && j < B.size()) {
        const double lo = std::max(A[i].lo, B[j].lo);
        const double hi = std::min(A[i].hi, B[j].hi);
        if (hi > lo) m += hi - lo;
        if (A[i].hi < B[j].hi) ++i; else ++j;
    }
    return m;
}

double symdiff_measure(const std::vector<AngularArc>& A,
                       const std::vector<AngularArc>& B) {
    return set_measure(A) + set_measure(B) - 2.0 * intersection_measure(A, B);
}

std::vector<AngularArc> merge_arcs(std::vector<AngularArc> arcs) {
    std::erase_if(arcs, [](const AngularArc& a) { return a.width() <= 0.0; });
    std::sort(arcs.begin(), arcs.end(),
              [](const AngularArc& x, const AngularArc& y) { return x.lo < y.lo; });
    std::vector<AngularArc> out;
    for (const auto& a : arcs) {
        if (!out.empty() && a.lo <= out.back().hi + 1e-14)
            out.back().hi = std::max(out.back().hi, a.hi);
        else
            out.push_back(a);
    }
    return out;
}

// integral of fn over [lo, hi] split at the density's breakpoints
double split_integral(const Density& d, double lo, double hi,
                      const std::function<double(double)>& fn,
                      bool singular_lo = false, bool singular_hi = false) {
    std::vector<double> cuts{lo};
    for (double bp : d.breakpoints())
        if (bp > lo && bp < hi) cuts.push_back(bp);
    cuts.push_back(hi);
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        QuadratureOptions opt;
        opt.abs_tol = 1e-12;
        opt.rel_tol = 1e-12;
        opt.singular_left = singular_lo && i == 0;
        opt.singular_right = singular_hi && i + 2 == cuts.size();
        if (cuts[i + 1] > cuts[i])
            total += integrate(fn, cuts[i], cuts[i + 1], opt);
    }
    return total;
}

double radial_g_integral(const Density& d, double lo, double hi) {
    if (hi <= lo) return 0.0;
    return split_integral(d, lo, hi, [&d](double t) { return d.g(t); });
}

} // namespace

// --------------------------------------------------------------- RingArcSet

RingArcSet::RingArcSet(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    require(nodes_.size() >= 2, "RingArcSet: need at least two radial nodes");
    require(nodes_.front().tau >= 0.0, "RingArcSet: radii must be >= 0");
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (i > 0)
            require(nodes_[i].tau > nodes_[i - 1].tau,
                    "RingArcSet: radii must increase strictly");
        for (const auto* list : {&nodes_[i].left, &nodes_[i].right})
            for (size_t j = 0; j < list->size(); ++j) {
                const auto& a = (*list)[j];
                require(a.hi >= a.lo, "RingArcSet: arc needs lo <= hi");
                require(a.lo >= -kPi - 1e-12 && a.hi <= kPi + 1e-12,
                        "RingArcSet: arcs must lie in [-pi, pi]");
                if (j > 0)
                    require(a.lo >= (*list)[j - 1].hi - 1e-14,
                            "RingArcSet: arcs must be disjoint and sorted");
            }
    }
    require(nodes_.front().left.empty(), "RingArcSet: inner node has no inner side");
    require(nodes_.back().right.empty(), "RingArcSet: outer node has no outer side");
    for (size_t p = 0; p + 1 < nodes_.size(); ++p)
        require(nodes_[p].right.size() == nodes_[p + 1].left.size(),
                "RingArcSet: arc count must be constant across a panel");
}

double RingArcSet::section_length(double tau, Side side) const {
    if (tau < nodes_.front().tau || tau > nodes_.back().tau) return 0.0;
    // locate panel
    size_t i = 1;
    while (i < nodes_.size() && nodes_[i].tau < tau) ++i;
    if (i == nodes_.size()) i = nodes_.size() - 1;
    if (tau == nodes_[i - 1].tau)
        return nodes_[i - 1].tau *
               set_measure(side == Side::left ? nodes_[i - 1].left : nodes_[i - 1].right);
    if (tau == nodes_[i].tau)
        return nodes_[i].tau *
               set_measure(side == Side::left ? nodes_[i].left : nodes_[i].right);
    const auto& lo = nodes_[i - 1].right;
    const auto& hi = nodes_[i].left;
    const double t = (tau - nodes_[i - 1].tau) / (nodes_[i].tau - nodes_[i - 1].tau);
    double width = 0.0;
    for (size_t j = 0; j < lo.size(); ++j)
        width += (1.0 - t) * lo[j].width() + t * hi[j].width();
    return tau * width;
}

double RingArcSet::weighted_volume(const Density& d) const {
    double total = 0.0;
    for (size_t p = 0; p + 1 < nodes_.size(); ++p) {
        const double t0 = nodes_[p].tau, t1 = nodes_[p + 1].tau;
        const double w0 = set_measure(nodes_[p].right);
        const double w1 = set_measure(nodes_[p + 1].left);
        auto fn = [&](double tau) {
            const double s = (tau - t0) / (t1 - t0);
            return d.f(tau) * tau * ((1.0 - s) * w0 + s * w1);
        };
        total += split_integral(d, t0, t1, fn);
    }
    return total;
}

double RingArcSet::weighted_perimeter(const Density& d) const {
    double total = 0.0;
    // branch curves over each panel
    for (size_t p = 0; p + 1 < nodes_.size(); ++p) {
        const double t0 = nodes_[p].tau, t1 = nodes_[p + 1].tau;
        const double dt = t1 - t0;
        const auto& lo = nodes_[p].right;
        const auto& hi = nodes_[p + 1].left;
        for (size_t j = 0; j < lo.size(); ++j) {
            const bool full0 = lo[j].width() >= 2.0 * kPi - kFullSnap;
            const bool full1 = hi[j].width() >= 2.0 * kPi - kFullSnap;
            require(full0 == full1,
                    "RingArcSet: a panel cannot interpolate between a full ring "
                    "and a partial arc");
            if (full0) continue;                         // no boundary along a full ring
            if (lo[j].width() <= kFullSnap && hi[j].width() <= kFullSnap)
                continue;                                // empty across the panel
            for (double slope : {(hi[j].lo - lo[j].lo) / dt, (hi[j].hi - lo[j].hi) / dt}) {
                auto fn = [&d, slope](double tau) {
                    const double q = tau * slope;
                    return d.f(tau) * std::sqrt(1.0 + q * q);
                };
                total += split_integral(d, t0, t1, fn);
            }
        }
    }
    // jump arcs at the nodes (terminations included via the empty sides)
    for (const auto& node : nodes_) {
        const double jump = symdiff_measure(node.left, node.right);
        if (jump > 0.0)
            total += node.tau * d.f(node.tau) * jump;
    }
    return total;
}

// --------------------------------------------------------------- CapProfile

CapProfile::CapProfile(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    require(nodes_.size() >= 2, "CapProfile: need at least two radial nodes");
    require(nodes_.front().tau >= 0.0, "CapProfile: radii must be >= 0");
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (i > 0)
            require(nodes_[i].tau > nodes_[i - 1].tau,
                    "CapProfile: radii must increase strictly");
        for (double th : {nodes_[i].theta_left, nodes_[i].theta_right})
            require(th >= -1e-12 && th <= kPi + 1e-12,
                    "CapProfile: half-width must lie in [0, pi]");
        nodes_[i].theta_left = std::clamp(nodes_[i].theta_left, 0.0, kPi);
        nodes_[i].theta_right = std::clamp(nodes_[i].theta_right, 0.0, kPi);
    }
}

CapProfile CapProfile::from_samples(const std::vector<double>& tau,
                                    const std::vector<double>& theta2) {
    require(tau.size() == theta2.size(), "CapProfile: tau and theta2 sizes differ");
    std::vector<Node> nodes(tau.size());
    for (size_t i = 0; i < tau.size(); ++i)
        nodes[i] = Node{tau[i], theta2[i], theta2[i]};
    return CapProfile(std::move(nodes));
}

double CapProfile::theta2(double tau, Side side) const {
    if (tau < nodes_.front().tau || tau > nodes_.back().tau) return 0.0;
    size_t i = 1;
    while (i < nodes_.size() && nodes_[i].tau < tau) ++i;
    if (i == nodes_.size()) i = nodes_.size() - 1;
    if (tau == nodes_[i - 1].tau)
        return side == Side::left ? nodes_[i - 1].theta_left : nodes_[i - 1].theta_right;
    if (tau == nodes_[i].tau)
        return side == Side::left ? nodes_[i].theta_left : nodes_[i].theta_right;
    const double t = (tau - nodes_[i - 1].tau) / (nodes_[i].tau - nodes_[i - 1].tau);
    return (1.0 - t) * nodes_[i - 1].theta_right + t * nodes_[i].theta_left;
}

double CapProfile::section_length(double tau, Side side) const {
    return 2.0 * tau * theta2(tau, side);
}

std::vector<CapProfile::Node> CapProfile::jump_nodes() const {
    std::vector<Node> out;
    for (const auto& n : nodes_)
        if (std::fabs(n.theta_left - n.theta_right) > 1e-14)
            out.push_back(n);
    return out;
}

RingArcSet CapProfile::arcs() const {
    auto cap_arc = [](double theta) -> std::vector<AngularArc> {
        if (theta <= kFullSnap) return {};
        if (theta >= kPi - kFullSnap) return {{-kPi, kPi}};
        return {{-theta, theta}};
    };
    std::vector<RingArcSet::Node> nodes;
    for (size_t i = 0; i < nodes_.size(); ++i) {
        RingArcSet::Node n;
        n.tau = nodes_[i].tau;
        n.left = (i == 0) ? std::vector<AngularArc>{} : cap_arc(nodes_[i].theta_left);
        n.right = (i + 1 == nodes_.size()) ? std::vector<AngularArc>{}
                                           : cap_arc(nodes_[i].theta_right);
        nodes.push_back(std::move(n));
    }
    // arc count must be constant across panels: pad pinched sides with a
    // zero-width arc matched to the surviving side
    for (size_t p = 0; p + 1 < nodes.size(); ++p) {
        auto& r = nodes[p].right;
        auto& l = nodes[p + 1].left;
        if (r.empty() && l.size() == 1)
            r.push_back({0.0, 0.0});
        if (l.empty() && r.size() == 1)
            l.push_back({0.0, 0.0});
    }
    return RingArcSet(std::move(nodes));
}

double weighted_volume(const CapProfile& p, const Density& d) {
    return p.arcs().weighted_volume(d);
}

double weighted_perimeter(const CapProfile& p, const Density& d) {
    return p.arcs().weighted_perimeter(d);
}

// --------------------------------------------------------------- ShapeUnion

namespace {

struct RadialRange { double lo, hi; bool full_ring; };

RadialRange component_range(const ShapeComponent& c) {
    if (const auto* b = std::get_if<CenteredBall>(&c)) return {0.0, b->r, true};
    if (const auto* a = std::get_if<Annulus>(&c)) return {a->r_in, a->r_out, true};
    if (const auto* o = std::get_if<OffCenterBall>(&c)) {
        const double d = std::hypot(o->cx, o->cy);
        return {std::max(0.0, d - o->r), d + o->r, false};
    }
    const auto& p = std::get<CapProfile>(c);
    return {p.nodes().front().tau, p.nodes().back().tau, false};
}

void verify_component(const ShapeComponent& c) {
    if (const auto* b = std::get_if<CenteredBall>(&c))
        require(b->r > 0.0, "ShapeUnion: ball radius must be > 0");
    if (const auto* a = std::get_if<Annulus>(&c))
        require(a->r_in >= 0.0 && a->r_out > a->r_in,
                "ShapeUnion: annulus needs 0 <= r_in < r_out");
    if (const auto* o = std::get_if<OffCenterBall>(&c))
        require(o->r > 0.0, "ShapeUnion: ball radius must be > 0");
}

void verify_disjoint(const ShapeUnion& s) {
    for (size_t i = 0; i < s.components.size(); ++i)
        for (size_t j = i + 1; j < s.components.size(); ++j) {
            const auto& ci = s.components[i];
            const auto& cj = s.components[j];
            const auto* oi = std::get_if<OffCenterBall>(&ci);
            const auto* oj = std::get_if<OffCenterBall>(&cj);
            if (oi && oj) {
                const double dist = std::hypot(oi->cx - oj->cx, oi->cy - oj->cy);
                require(dist > oi->r + oj->r,
                        "ShapeUnion: off-centre balls overlap (or touch)");
                continue;
            }
            const RadialRange ri = component_range(ci);
            const RadialRange rj = component_range(cj);
            const bool radially_disjoint = ri.hi < rj.lo || rj.hi < ri.lo;
            if (ri.full_ring || rj.full_ring) {
                require(radially_disjoint,
                        "ShapeUnion: components overlap radially with a full ring");
            } else {
                // two angular components: only the conservative radial test is
                // implemented; report rather than guess
                require(radially_disjoint,
                        "ShapeUnion: cannot verify disjointness of two angular "
                        "components with overlapping radial ranges");
            }
        }
}

// Occupancy arc of an off-centre ball at radius tau (possibly split at the
// branch cut), plus its angular half-width.
std::vector<AngularArc> off_center_arcs(const OffCenterBall& o, double tau) {
    const double c = std::hypot(o.cx, o.cy);
    if (c == 0.0)
        return tau < o.r ? std::vector<AngularArc>{{-kPi, kPi}} : std::vector<AngularArc>{};
    if (tau <= o.r - c && tau > 0.0)
        return {{-kPi, kPi}};                            // ring entirely inside the ball
    if (tau <= std::fabs(c - o.r) || tau >= c + o.r)
        return {};
    const double cosb = (tau * tau + c * c - o.r * o.r) / (2.0 * tau * c);
    const double beta = std::acos(std::clamp(cosb, -1.0, 1.0));
    const double theta_c = std::atan2(o.cy, o.cx);
    double lo = theta_c - beta, hi = theta_c + beta;
    std::vector<AngularArc> out;
    if (lo < -kPi) {
        out.push_back({lo + 2.0 * kPi, kPi});
        out.push_back({-kPi, hi});
    } else if (hi > kPi) {
        out.push_back({lo, kPi});
        out.push_back({-kPi, hi - 2.0 * kPi});
    } else {
        out.push_back({lo, hi});
    }
    return merge_arcs(std::move(out));
}

std::vector<AngularArc> component_arcs(const ShapeComponent& comp, double tau, Side side) {
    const double eps = 1e-13 * std::max(1.0, tau);
    if (const auto* b = std::get_if<CenteredBall>(&comp)) {
        const bool in = side == Side::left ? tau <= b->r : tau < b->r;
        return in ? std::vector<AngularArc>{{-kPi, kPi}} : std::vector<AngularArc>{};
    }
    if (const auto* a = std::get_if<Annulus>(&comp)) {
        const bool in = side == Side::left ? (tau > a->r_in && tau <= a->r_out)
                                           : (tau >= a->r_in && tau < a->r_out);
        return in ? std::vector<AngularArc>{{-kPi, kPi}} : std::vector<AngularArc>{};
    }
    if (const auto* o = std::get_if<OffCenterBall>(&comp))
        return off_center_arcs(*o, side == Side::left ? tau - eps : tau + eps);
    const auto& p = std::get<CapProfile>(comp);
    const double th = p.theta2(tau, side);
    if (th <= kFullSnap) return {};
    if (th >= kPi - kFullSnap) return {{-kPi, kPi}};
    return {{-th, th}};
}

} // namespace

double weighted_volume(const ShapeUnion& s, const Density& d) {
    if (s.check_disjoint) verify_disjoint(s);
    double total = 0.0;
    for (const auto& comp : s.components) {
        verify_component(comp);
        if (const auto* b = std::get_if<CenteredBall>(&comp)) {
            total += 2.0 * kPi * radial_g_integral(d, 0.0, b->r);
        } else if (const auto* a = std::get_if<Annulus>(&comp)) {
            total += 2.0 * kPi * radial_g_integral(d, a->r_in, a->r_out);
        } else if (const auto* o = std::get_if<OffCenterBall>(&comp)) {
            const double c = std::hypot(o->cx, o->cy);
            const double lo = std::max(0.0, c - o->r), hi = c + o->r;
            if (c < o->r)                       // inner disc fully covered
                total += 2.0 * kPi * radial_g_integral(d, 0.0, o->r - c);
            auto fn = [&](double tau) {
                double width = 0.0;
                for (const auto& arc : off_center_arcs(*o, tau)) width += arc.width();
                return d.f(tau) * tau * width;
            };
            const double band_lo = c < o->r ? o->r - c : lo;
            total += split_integral(d, band_lo, hi, fn, true, true);
        } else {
            total += weighted_volume(std::get<CapProfile>(comp), d);
        }
    }
    return total;
}

double weighted_perimeter(const ShapeUnion& s, const Density& d) {
    verify_disjoint(s);
    double total = 0.0;
    for (const auto& comp : s.components) {
        verify_component(comp);
        if (const auto* b = std::get_if<CenteredBall>(&comp)) {
            total += 2.0 * kPi * d.g(b->r);
        } else if (const auto* a = std::get_if<Annulus>(&comp)) {
            total += 2.0 * kPi * (d.g(a->r_in) + d.g(a->r_out));
        } else if (const auto* o = std::get_if<OffCenterBall>(&comp)) {
            const double c = std::hypot(o->cx, o->cy);
            auto fn = [&](double phi) {
                const double r = std::sqrt(c * c + o->r * o->r +
                                           2.0 * c * o->r * std::cos(phi));
                return d.f(r);
            };
            // split where the circle crosses density breakpoints
            std::vector<double> cuts{0.0, kPi};
            for (double bp : d.breakpoints()) {
                const double cosv = (bp * bp - c * c - o->r * o->r) / (2.0 * c * o->r);
                if (c > 0.0 && cosv > -1.0 && cosv < 1.0)
                    cuts.push_back(std::acos(cosv));
            }
            std::sort(cuts.begin(), cuts.end());
            double sum = 0.0;
            for (size_t i = 0; i + 1 < cuts.size(); ++i)
                if (cuts[i + 1] > cuts[i])
                    sum += integrate(fn, cuts[i], cuts[i + 1],
                                     {1e-12, 1e-12, 50, false, false});
            total += 2.0 * o->r * sum;
        } else {
            total += weighted_perimeter(std::get<CapProfile>(comp), d);
        }
    }
    return total;
}

// -------------------------------------------------------------- symmetrize

SymmetrizeResult symmetrize(const RingArcSet& s, const Density& d) {
    std::vector<CapProfile::Node> nodes;
    for (const auto& n : s.nodes())
        nodes.push_back({n.tau, 0.5 * set_measure(n.left), 0.5 * set_measure(n.right)});
    SymmetrizeResult out{CapProfile(std::move(nodes)), 0, 0, 0, 0, 0};
    out.perimeter_before = s.weighted_perimeter(d);
    out.perimeter_after = weighted_perimeter(out.profile, d);
    out.volume_before = s.weighted_volume(d);
    out.volume_after = weighted_volume(out.profile, d);
    out.eps_disc = 1e-9 * (1.0 + out.perimeter_before);
    return out;
}

SymmetrizeResult symmetrize(const ShapeUnion& s, const Density& d, int radial_nodes) {
    if (s.check_disjoint) verify_disjoint(s);
    require(!s.components.empty(), "symmetrize: empty shape");
    // critical radii: component boundaries, wrap-split radii, profile nodes
    std::set<double> critical;
    double tau_max = 0.0;
    bool reaches_zero = false;
    for (const auto& comp : s.components) {
        verify_component(comp);
        const RadialRange r = component_range(comp);
        tau_max = std::max(tau_max, r.hi);
        if (r.lo <= 0.0) reaches_zero = true; else critical.insert(r.lo);
        critical.insert(r.hi);
        if (const auto* o = std::get_if<OffCenterBall>(&comp)) {
            // radius where the occupancy arc reaches the branch cut
            const double c = std::hypot(o->cx, o->cy);
            const double phi = kPi - std::fabs(std::atan2(o->cy, o->cx));
            if (c > 0.0 && phi < kPi) {
                const double disc = c * c * std::cos(phi) * std::cos(phi) - c * c + o->r * o->r;
                if (disc > 0.0) {
                    for (double root : {c * std::cos(phi) + std::sqrt(disc),
                                        c * std::cos(phi) - std::sqrt(disc)})
                        if (root > r.lo && root < r.hi) critical.insert(root);
                }
            }
            if (c < o->r) critical.insert(o->r - c);
        }
        if (const auto* p = std::get_if<CapProfile>(&comp))
            for (const auto& n : p->nodes()) critical.insert(n.tau);
    }
    const double tau_min = reaches_zero ? 0.0 : *critical.begin();
    std::set<double> grid(critical);
    grid.insert(tau_min);
    grid.insert(tau_max);
    const double span = tau_max - tau_min;
    for (int i = 0; i <= radial_nodes; ++i)
        grid.insert(tau_min + span * i / radial_nodes);

    std::vector<RingArcSet::Node> nodes;
    for (double tau : grid) {
        if (tau < tau_min || tau > tau_max) continue;
        RingArcSet::Node n;
        n.tau = tau;
        for (Side side : {Side::left, Side::right}) {
            std::vector<AngularArc> all;
            for (const auto& comp : s.components)
                for (auto& a : component_arcs(comp, tau, side)) all.push_back(a);
            auto merged = merge_arcs(std::move(all));
            (side == Side::left ? n.left : n.right) = std::move(merged);
        }
        nodes.push_back(std::move(n));
    }
    nodes.front().left.clear();
    nodes.back().right.clear();
    // Arc counts change only at critical radii, which are all grid nodes, so
    // the panel invariant holds; the constructor rejects anything unresolved.
    RingArcSet sampled(std::move(nodes));
    SymmetrizeResult out = symmetrize(sampled, d);
    // calibrate the discretisation bound against the exact input perimeter
    const double exact_before = weighted_perimeter(s, d);
    const double exact_volume = weighted_volume(s, d);
    out.eps_disc = 10.0 * (std::fabs(out.perimeter_before - exact_before) +
                           std::fabs(out.volume_before - exact_volume)) +
                   1e-9 * (1.0 + exact_before);
    out.perimeter_before = exact_before;
    out.volume_before = exact_volume;
    return out;
}

SymmetrizeResult symmetrize_raster(const std::function<bool(double, double)>& inside,
                                   double half_extent, int cells, const Density& d) {
    require(cells >= 16, "symmetrize_raster: need at least a 16x16 grid");
    const double cell = 2.0 * half_extent / cells;
    const int rings = static_cast<int>(std::ceil(std::sqrt(2.0) * half_extent / cell)) + 1;
    std::vector<std::vector<double>> ring_angles(rings);
    for (int iy = 0; iy < cells; ++iy)
        for (int ix = 0; ix < cells; ++ix) {
            const double x = -half_extent + (ix + 0.5) * cell;
            const double y = -half_extent + (iy + 0.5) * cell;
            if (!inside(x, y)) continue;
            const double tau = std::hypot(x, y);
            const int k = static_cast<int>(tau / cell);
            if (k >= 0 && k < rings)
                ring_angles[k].push_back(std::atan2(y, x));
        }
    // per-ring occupancy runs -> arcs held constant across the ring band
    auto ring_arcs = [&](int k) -> std::vector<AngularArc> {
        auto& ang = ring_angles[k];
        if (ang.empty()) return {};
        std::sort(ang.begin(), ang.end());
        const double tau_mid = (k + 0.5) * cell;
        const double half_step = 0.75 * cell / std::max(tau_mid, 0.5 * cell);
        // a ring band straddling a curved boundary is only patchily occupied;
        // gaps below a few cells are binning noise, not holes in the set
        const double gap = 8.0 * cell / std::max(tau_mid, cell);
        std::vector<AngularArc> arcs;
        double run_lo = ang[0], run_hi = ang[0];
        for (size_t i = 1; i <= ang.size(); ++i) {
            if (i < ang.size() && ang[i] - run_hi <= gap) {
                run_hi = ang[i];
            } else {
                arcs.push_back({std::max(-kPi, run_lo - half_step),
                                std::min(kPi, run_hi + half_step)});
                if (i < ang.size()) run_lo = run_hi = ang[i];
            }
        }
        std::erase_if(arcs, [&](const AngularArc& a) { return a.width() < gap; });
        return merge_arcs(std::move(arcs));
    };
    std::vector<std::vector<AngularArc>> per_ring(rings);
    for (int k = 0; k < rings; ++k) per_ring[k] = ring_arcs(k);
    // the independent per-ring endpoint estimates wobble by O(cell/tau) with
    // alternating sign, which would pile up O(1) of spurious jump arcs; a
    // short moving average across rings with matching arc counts removes it
    {
        std::vector<std::vector<AngularArc>> smoothed = per_ring;
        for (int k = 0; k < rings; ++k) {
            const size_t m = per_ring[k].size();
            if (m == 0) continue;
            for (size_t j = 0; j < m; ++j) {
                double lo_sum = 0.0, hi_sum = 0.0;
                int count = 0;
                for (int w = -2; w <= 2; ++w) {
                    const int kk = k + w;
                    if (kk < 0 || kk >= rings || per_ring[kk].size() != m) continue;
                    lo_sum += per_ring[kk][j].lo;
                    hi_sum += per_ring[kk][j].hi;
                    ++count;
                }
                smoothed[k][j] = {lo_sum / count, hi_sum / count};
            }
        }
        per_ring = std::move(smoothed);
    }
    std::vector<RingArcSet::Node> nodes(rings + 1);
    for (int j = 0; j <= rings; ++j) {
        nodes[j].tau = j * cell;
        if (j > 0) nodes[j].left = per_ring[j - 1];
        if (j < rings) nodes[j].right = per_ring[j];
    }
    // staircase representation: every panel holds its arcs constant
    RingArcSet sampled(std::move(nodes));
    SymmetrizeResult out = symmetrize(sampled, d);
    out.eps_disc = 10.0 * cell * (1.0 + out.perimeter_before);
    return out;
}

// -------------------------------------------------------------- CurveSample

CurveSample CurveSample::from_points(const std::vector<std::pair<double, double>>& pts) {
    require(pts.size() >= 3, "CurveSample: need at least three points");
    CurveSample c;
    const size_t n = pts.size();
    c.s.resize(n);
    c.x.resize(n);
    c.y.resize(n);
    c.r.resize(n);
    c.theta.resize(n);
    c.alpha.resize(n);
    c.sigma.resize(n);
    c.curvature.assign(n, 0.0);
    c.s[0] = 0.0;
    for (size_t i = 0; i < n; ++i) {
        c.x[i] = pts[i].first;
        c.y[i] = pts[i].second;
        if (i > 0)
            c.s[i] = c.s[i - 1] + std::hypot(c.x[i] - c.x[i - 1], c.y[i] - c.y[i - 1]);
        c.r[i] = std::hypot(c.x[i], c.y[i]);
        c.theta[i] = std::atan2(c.y[i], c.x[i]);
    }
    // unwrap theta
    for (size_t i = 1; i < n; ++i) {
        while (c.theta[i] - c.theta[i - 1] > kPi) c.theta[i] -= 2.0 * kPi;
        while (c.theta[i] - c.theta[i - 1] < -kPi) c.theta[i] += 2.0 * kPi;
    }
    // tangent angles from central differences, unwrapped
    for (size_t i = 0; i < n; ++i) {
        const size_t i0 = i == 0 ? 0 : i - 1;
        const size_t i1 = i + 1 == n ? i : i + 1;
        c.alpha[i] = std::atan2(c.y[i1] - c.y[i0], c.x[i1] - c.x[i0]);
    }
    for (size_t i = 1; i < n; ++i) {
        while (c.alpha[i] - c.alpha[i - 1] > kPi) c.alpha[i] -= 2.0 * kPi;
        while (c.alpha[i] - c.alpha[i - 1] < -kPi) c.alpha[i] += 2.0 * kPi;
    }
    for (size_t i = 0; i < n; ++i)
        c.sigma[i] = c.alpha[i] - c.theta[i];
    for (size_t i = 1; i + 1 < n; ++i)
        c.curvature[i] = (c.alpha[i + 1] - c.alpha[i - 1]) / (c.s[i + 1] - c.s[i - 1]);
    if (n >= 3) {
        c.curvature[0] = c.curvature[1];
        c.curvature[n - 1] = c.curvature[n - 2];
    }
    return c;
}

CurveSample CurveSample::circle(double radius, int n) {
    require(radius > 0.0 && n >= 8, "CurveSample::circle: bad parameters");
    std::vector<std::pair<double, double>> pts(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double phi = 2.0 * kPi * i / n;
        pts[i] = {radius * std::cos(phi), radius * std::sin(phi)};
    }
    return from_points(pts);
}

CurveSample CurveSample::from_cap_profile(const CapProfile& p, int samples_per_panel) {
    require(p.jump_nodes().empty(),
            "CurveSample::from_cap_profile: profile must be continuous");
    std::vector<std::pair<double, double>> pts;
    const auto& nodes = p.nodes();
    for (size_t q = nodes.size() - 1; q > 0; --q) {
        const double t1 = nodes[q].tau, t0 = nodes[q - 1].tau;
        for (int i = 0; i < samples_per_panel; ++i) {
            const double tau = t1 - (t1 - t0) * i / samples_per_panel;
            const double th = p.theta2(tau, Side::left);
            pts.push_back({tau * std::cos(th), tau * std::sin(th)});
        }
    }
    const double tau0 = nodes.front().tau;
    const double th0 = p.theta2(tau0, Side::right);
    pts.push_back({tau0 * std::cos(th0), tau0 * std::sin(th0)});
    return from_points(pts);
}

CurveSample::IdentityErrors CurveSample::identity_errors() const {
    IdentityErrors e{0.0, 0.0, 0.0};
    const size_t n = s.size();
    for (size_t i = 1; i + 1 < n; ++i) {
        const double ds = s[i + 1] - s[i - 1];
        const double rdot = (r[i + 1] - r[i - 1]) / ds;
        const double thdot = (theta[i + 1] - theta[i - 1]) / ds;
        const double speed = std::hypot((x[i + 1] - x[i - 1]) / ds,
                                        (y[i + 1] - y[i - 1]) / ds);
        e.unit_speed = std::max(e.unit_speed, std::fabs(speed - 1.0));
        e.radial = std::max(e.radial, std::fabs(rdot - std::cos(sigma[i])));
        e.angular = std::max(e.angular, std::fabs(r[i] * thdot - std::sin(sigma[i])));
    }
    return e;
}

// ------------------------------------------------------- profile kinematics

std::vector<KinematicsNode> profile_kinematics(const CapProfile& p, const Density& d) {
    const auto& nodes = p.nodes();
    const size_t n = nodes.size();
    std::vector<KinematicsNode> out(n);
    // gamma(tau) on the node grid, upper branch
    std::vector<double> gx(n), gy(n);
    for (size_t i = 0; i < n; ++i) {
        const double th = 0.5 * (nodes[i].theta_left + nodes[i].theta_right);
        gx[i] = nodes[i].tau * std::cos(th);
        gy[i] = nodes[i].tau * std::sin(th);
    }
    for (size_t i = 0; i < n; ++i) {
        KinematicsNode& k = out[i];
        k.tau = nodes[i].tau;
        k.theta2 = 0.5 * (nodes[i].theta_left + nodes[i].theta_right);
        const bool jump = std::fabs(nodes[i].theta_left - nodes[i].theta_right) > 1e-14;
        const bool interior = i > 0 && i + 1 < n;
        if (jump || !interior) {
            k.ok = false;
            continue;
        }
        const bool neighbour_jump =
            std::fabs(nodes[i - 1].theta_left - nodes[i - 1].theta_right) > 1e-14 ||
            std::fabs(nodes[i + 1].theta_left - nodes[i + 1].theta_right) > 1e-14;
        if (neighbour_jump) {
            k.ok = false;
            continue;
        }
        const double dtau = nodes[i + 1].tau - nodes[i - 1].tau;
        k.dtheta2 = (nodes[i + 1].theta_left - nodes[i - 1].theta_right) / dtau;
        const double q = k.tau * k.dtheta2;
        if (!std::isfinite(q) || std::fabs(q) > 1e8) {
            k.ok = false;                        // vertical tangent unresolved
            continue;
        }
        k.u = -q / std::sqrt(1.0 + q * q);
        // discrete curvature from the turn of consecutive chords, traversing
        // with decreasing radius so that {t, n} is positively oriented
        const double v1x = gx[i] - gx[i + 1], v1y = gy[i] - gy[i + 1];
        const double v2x = gx[i - 1] - gx[i], v2y = gy[i - 1] - gy[i];
        const double cross = v1x * v2y - v1y * v2x;
        const double dot = v1x * v2x + v1y * v2y;
        const double dalpha = std::atan2(cross, dot);
        const double ds = 0.5 * (std::hypot(v1x, v1y) + std::hypot(v2x, v2y));
        k.curvature = dalpha / ds;
        k.generalized_curvature = k.curvature + d.rho(k.tau, Side::mean) * k.u;
    }
    return out;
}

// --------------------------------------------------------------- spec files

ShapeUnion ShapeUnion::parse(std::istream& in, const std::string& origin) {
    ShapeUnion s;
    std::string line;
    int number = 0;
    int pending_profile_nodes = 0;
    std::vector<CapProfile::Node> profile_nodes;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        auto bad = [&](const std::string& msg) {
            return std::invalid_argument(origin + ":" + std::to_string(number) + ": " + msg);
        };
        if (pending_profile_nodes > 0) {
            CapProfile::Node node;
            try {
                node.tau = std::stod(word);
                std::string t1, t2;
                if (!(ls >> t1)) throw bad("cap_profile node needs tau and theta2");
                node.theta_left = std::stod(t1);
                node.theta_right = (ls >> t2) ? std::stod(t2) : node.theta_left;
            } catch (const std::invalid_argument&) {
                throw bad("malformed cap_profile node");
            }
            profile_nodes.push_back(node);
            if (--pending_profile_nodes == 0)
                s.components.push_back(CapProfile(std::move(profile_nodes)));
            continue;
        }
        if (word == "ball") {
            double r;
            if (!(ls >> r)) throw bad("ball needs a radius");
            s.components.push_back(CenteredBall{r});
        } else if (word == "offcenter_ball") {
            double cx, cy, r;
            if (!(ls >> cx >> cy >> r)) throw bad("offcenter_ball needs cx cy r");
            s.components.push_back(OffCenterBall{cx, cy, r});
        } else if (word == "annulus") {
            double lo, hi;
            if (!(ls >> lo >> hi)) throw bad("annulus needs r_in r_out");
            s.components.push_back(Annulus{lo, hi});
        } else if (word == "cap_profile") {
            if (!(ls >> pending_profile_nodes) || pending_profile_nodes < 2)
                throw bad("cap_profile needs a node count >= 2");
            profile_nodes.clear();
        } else {
            throw bad("unknown component '" + word + "'");
        }
    }
    if (pending_profile_nodes > 0)
        throw std::invalid_argument(origin + ": truncated cap_profile block");
    if (s.components.empty())
        throw std::invalid_argument(origin + ": no components");
    return s;
}

ShapeUnion ShapeUnion::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("ShapeUnion::load: cannot open '" + path + "'");
    return parse(in, path);
}

} // namespace isolab
