#pragma once

#include <cmath>

#include "fmd/core.hpp"
#include "fmd/rng.hpp"
#include "fmd/special.hpp"

namespace fmd {

// One draw of the standardized positive alpha-stable law with Laplace
// transform exp(-s^alpha), by Kanter's representation:
//
//   xi = sin(alpha V) / (sin V)^{1/alpha}
//        * ( sin((1-alpha) V) / W )^{(1-alpha)/alpha}
//
// with V uniform on (0, pi) and W a unit exponential. The draw is strictly
// positive for every admissible (V, W).
inline double sample_positive_stable(AlphaParam alpha, Rng& rng) {
  const double a = alpha.value;
  const double v = constants::pi * rng.uniform01();
  const double w = rng.exponential();
  const double lead = std::sin(a * v) / std::pow(std::sin(v), 1.0 / a);
  const double tail = std::pow(std::sin((1.0 - a) * v) / w, (1.0 - a) / a);
  return lead * tail;
}

// CDF of the alpha = 1/2 positive stable law (the Levy distribution with
// unit scale in the exp(-s^{1/2}) normalization): P(xi <= x) = erfc(1/(2
// sqrt(x))). Closed form used to validate the sampler.
inline double positive_stable_half_cdf(double x) {
  if (!(x > 0.0)) return 0.0;
  return std::erfc(0.5 / std::sqrt(x));
}

}  // namespace fmd
