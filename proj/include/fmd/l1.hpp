#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "fmd/core.hpp"

namespace fmd {

// Weights b_k = k^{1-alpha} - (k-1)^{1-alpha} of the piecewise-constant (L1)
// discretization of the fractional integral. b_1 = 1 exactly, then strictly
// decreasing to 0; their telescoped partial sums control both stability and
// mass conservation of the marching schemes.
struct L1Coefficients {
  double alpha;
  std::vector<double> b;  // b[k] for k = 1..K; b[0] is an unused NaN guard

  long max_index() const { return static_cast<long>(b.size()) - 1; }

  double operator[](long k) const { return b[static_cast<size_t>(k)]; }

  // Marching weight of history level j in the update of level n.
  double weight(long n, long j) const {
    return b[static_cast<size_t>(n - j)] - b[static_cast<size_t>(n - j + 1)];
  }
};

// First K coefficients. The difference of powers is evaluated in the
// cancellation-free form -k^{1-alpha} * expm1((1-alpha) * log1p(-1/k)),
// which stays fully accurate when k^{1-alpha} and (k-1)^{1-alpha} agree to
// many digits at large k.
inline L1Coefficients l1_coefficients(AlphaParam alpha, long K) {
  if (K < 1) {
    throw ConfigError("l1_coefficients requires K >= 1");
  }
  std::vector<double> b(static_cast<size_t>(K) + 1);
  b[0] = std::numeric_limits<double>::quiet_NaN();
  b[1] = 1.0;
  const double e = 1.0 - alpha.value;
  for (long k = 2; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    b[static_cast<size_t>(k)] =
        -std::pow(kd, e) * std::expm1(e * std::log1p(-1.0 / kd));
  }
  return {alpha.value, std::move(b)};
}

}  // namespace fmd
