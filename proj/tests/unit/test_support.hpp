#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ndtaxis/grid.hpp"

namespace ndtaxis::testing {

// Uniform random cell values in [lo, hi].
inline ScalarField random_field(const Grid& grid, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> values(grid.size());
    for (double& x : values) x = dist(rng);
    return ScalarField(grid, std::move(values));
}

// Smooth strictly positive profile built from a few cosines (Neumann-compatible).
inline ScalarField smooth_positive_field(const Grid& grid, std::mt19937_64& rng, double base = 2.0) {
    std::uniform_real_distribution<double> amp(-0.4, 0.4);
    const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
    const double lx = grid.length(0), ly = grid.length(1);
    return ScalarField::sample(grid, [&](double x, double y) {
        return base + a1 * std::cos(M_PI * x / lx) + a2 * std::cos(2 * M_PI * x / lx) +
               a3 * std::cos(M_PI * y / ly) * std::cos(M_PI * x / lx);
    });
}

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace ndtaxis::testing
