#include "isolab/random_rho.hpp"

#include <algorithm>
#include <cmath>

namespace isolab {

std::pair<double, double> random_interval(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a_dist(0.05, 6.0);
    std::uniform_real_distribution<double> len_dist(0.2, 4.0);
    const double a = a_dist(rng);
    const double b = std::min(a + len_dist(rng), 10.0);
    return {a, b};
}

RhoFunction random_step_rho(std::mt19937_64& rng, double a, double b, int max_jumps,
                            double mean_increment, double zero_prob) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (u01(rng) < zero_prob)
        return RhoFunction::constant(0.0, a, b);
    std::uniform_int_distribution<int> jump_count(0, max_jumps);
    std::exponential_distribution<double> increment(1.0 / mean_increment);
    const int k = jump_count(rng);
    std::vector<double> jumps(k);
    std::uniform_real_distribution<double> pos(a + 1e-6 * (b - a), b - 1e-6 * (b - a));
    for (auto& j : jumps) j = pos(rng);
    std::sort(jumps.begin(), jumps.end());
    jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
    std::vector<double> levels(jumps.size() + 1);
    levels[0] = increment(rng);
    for (size_t i = 1; i < levels.size(); ++i)
        levels[i] = levels[i - 1] + increment(rng);
    return RhoFunction::step(std::move(jumps), std::move(levels), a, b);
}

Density random_convex_density(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double pick = u01(rng);
    if (pick < 0.2)
        return Density::constant(u01(rng) - 0.5);
    if (pick < 0.5)
        return Density::linear(1.2 * u01(rng));
    if (pick < 0.75) {
        std::uniform_real_distribution<double> c_dist(0.1, 1.0);
        std::uniform_real_distribution<double> p_dist(1.0, 2.2);
        return Density::power(c_dist(rng), p_dist(rng));
    }
    std::uniform_int_distribution<int> seg_count(2, 4);
    const int n = seg_count(rng);
    std::vector<double> breaks{0.0}, slopes;
    double slope = u01(rng) < 0.4 ? 0.0 : 0.5 * u01(rng);
    slopes.push_back(slope);
    double at = 0.0;
    for (int i = 1; i < n; ++i) {
        at += 0.3 + 1.2 * u01(rng);
        slope += 0.8 * u01(rng);
        breaks.push_back(at);
        slopes.push_back(slope);
    }
    return Density::piecewise_linear(std::move(breaks), std::move(slopes));
}

RingArcSet random_multibump(std::mt19937_64& rng) {
    constexpr double kPi = 3.141592653589793;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double r0 = 0.2 + 0.8 * u01(rng);
    const double r1 = r0 + 0.5 + 1.5 * u01(rng);
    std::uniform_int_distribution<int> bump_count(1, 3);
    const int bumps = bump_count(rng);
    const int rings = 9;

    // confine bump j to its own angular sector so disjointness is structural
    const double sector = 2.0 * kPi / bumps;
    std::vector<RingArcSet::Node> nodes(rings);
    std::vector<double> center(bumps), half(bumps);
    for (int j = 0; j < bumps; ++j) {
        center[j] = -kPi + sector * (j + 0.5);
        half[j] = sector * (0.08 + 0.12 * u01(rng));
    }
    for (int i = 0; i < rings; ++i) {
        RingArcSet::Node n;
        n.tau = r0 + (r1 - r0) * i / (rings - 1);
        std::vector<AngularArc> arcs;
        for (int j = 0; j < bumps; ++j) {
            center[j] += sector * 0.12 * (u01(rng) - 0.5);
            half[j] = std::clamp(half[j] + sector * 0.05 * (u01(rng) - 0.5),
                                 0.03 * sector, 0.35 * sector);
            const double clo = -kPi + sector * j + 0.05 * sector;
            const double chi = -kPi + sector * (j + 1) - 0.05 * sector;
            center[j] = std::clamp(center[j], clo + half[j], chi - half[j]);
            arcs.push_back({center[j] - half[j], center[j] + half[j]});
        }
        std::sort(arcs.begin(), arcs.end(),
                  [](const AngularArc& x, const AngularArc& y) { return x.lo < y.lo; });
        if (i > 0) n.left = arcs;
        if (i + 1 < rings) n.right = arcs;
        nodes[i] = std::move(n);
    }
    return RingArcSet(std::move(nodes));
}

} // namespace isolab
