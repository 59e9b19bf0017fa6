#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cuspext {

/// All sampling is driven by an explicitly seeded engine so that reports are
/// reproducible for a given (seed, count).
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

/// Uniform direction on the unit sphere of R^dim (dim >= 1).
std::vector<double> random_unit_vector(Rng& rng, std::size_t dim);

/// Uniform point in the ball B^dim(0, radius).
std::vector<double> random_in_ball(Rng& rng, std::size_t dim, double radius);

}  // namespace cuspext
