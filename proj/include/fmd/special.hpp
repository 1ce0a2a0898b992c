#pragma once

#include <cmath>

#include "fmd/core.hpp"

namespace fmd {

// Gamma function for strictly positive argument.
inline double special_gamma(double z) {
  if (!(z > 0.0)) {
    throw ConfigError("special_gamma requires a positive argument, got " +
                      std::to_string(z));
  }
  return std::tgamma(z);
}

// Beta function B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b) for a, b > 0, evaluated
// through log-gamma so that large arguments cannot overflow intermediates.
inline double special_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw ConfigError("special_beta requires positive arguments");
  }
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
}

}  // namespace fmd
