#pragma once

#include <stdexcept>
#include <string>

namespace fmd {

// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A stencil or lookup reached outside the supplied grid window, i.e. the
// window does not contain the domain of dependence of the requested value.
class DomainOfDependenceError : public Error {
 public:
  using Error::Error;
};

// An adaptive routine exhausted its budget before reaching the requested
// tolerance; carries the error estimate that was actually achieved.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// A hard resource cap (path-length budget, ...) was hit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Direction of the one-sided operator D^alpha_+/-. Plus acts along the
// characteristic x - t = C (transport to the right), Minus along x + t = C.
enum class Direction { Plus, Minus };

inline int direction_sign(Direction dir) noexcept {
  return dir == Direction::Plus ? +1 : -1;
}

inline const char* direction_name(Direction dir) noexcept {
  return dir == Direction::Plus ? "plus" : "minus";
}

// Fractional order alpha, valid strictly inside (0,1).
struct AlphaParam {
  double value;

  explicit AlphaParam(double alpha) : value(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw ConfigError("fractional order must lie strictly inside (0,1), got " +
                        std::to_string(alpha));
    }
  }
};

}  // namespace fmd
