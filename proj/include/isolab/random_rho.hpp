#pragma once

#include <random>

#include "isolab/density.hpp"
#include "isolab/geometry.hpp"

namespace isolab {

/// Random interval [a, b] inside (0, 10].
std::pair<double, double> random_interval(std::mt19937_64& rng);

/// Random non-decreasing step coefficient: up to `max_jumps` jumps at uniform
/// positions with exponentially distributed increments; with probability
/// `zero_prob` the zero coefficient (the equality case) is produced instead.
RhoFunction random_step_rho(std::mt19937_64& rng, double a, double b,
                            int max_jumps = 8, double mean_increment = 0.5,
                            double zero_prob = 0.125);

/// Random density from the admissible families with moderate growth.
Density random_convex_density(std::mt19937_64& rng);

/// Random multi-bump angular set: 1-3 disjoint bumps per ring whose centres
/// and half-widths drift over the radial grid. Far from cap-symmetric, so
/// symmetrisation decreases its perimeter strictly.
RingArcSet random_multibump(std::mt19937_64& rng);

} // namespace isolab
