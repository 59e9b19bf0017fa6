#include "cuspext/random.hpp"

#include <cmath>

namespace cuspext {

std::vector<double> random_unit_vector(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  for (;;) {
    double norm = 0.0;
    for (double& c : v) {
      c = normal(rng);
      norm += c * c;
    }
    norm = std::sqrt(norm);
    if (norm > 1e-12) {
      for (double& c : v) c /= norm;
      return v;
    }
  }
}

std::vector<double> random_in_ball(Rng& rng, std::size_t dim, double radius) {
  std::vector<double> v = random_unit_vector(rng, dim);
  const double r = radius * std::pow(uniform(rng, 0.0, 1.0), 1.0 / static_cast<double>(dim));
  for (double& c : v) c *= r;
  return v;
}

}  // namespace cuspext
