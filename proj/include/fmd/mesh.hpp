#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fmd/core.hpp"

namespace fmd {

// Uniform space-time lattice with one shared step: x_i = i*h, t_n = n*h.
// Cells are the half-open intervals (x_{i-1/2}, x_{i+1/2}], so a point mass
// sitting on a cell edge belongs to exactly one cell (the one below it).
struct MeshSpec {
  double h;
  long i_min;
  long i_max;
  long n_steps;

  MeshSpec(double h_, long i_min_, long i_max_, long n_steps_)
      : h(h_), i_min(i_min_), i_max(i_max_), n_steps(n_steps_) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw ConfigError("mesh step h must be positive and finite");
    }
    if (i_max < i_min) {
      throw ConfigError("mesh window is empty: i_max < i_min");
    }
    if (n_steps < 1) {
      throw ConfigError("mesh needs at least one time step");
    }
  }

  double x(long i) const { return static_cast<double>(i) * h; }
  double t(long n) const { return static_cast<double>(n) * h; }
  double horizon() const { return t(n_steps); }
  long cells() const { return i_max - i_min + 1; }
  bool contains(long i) const { return i >= i_min && i <= i_max; }

  // Index of the cell containing x: x in (x_{i-1/2}, x_{i+1/2}].
  long cell_of(double x) const {
    return static_cast<long>(std::ceil(x / h - 0.5));
  }
};

// Cell averages of one time level over the window [i_min, i_max].
struct FieldFrame {
  long i_min;
  std::vector<double> values;  // values[k] is the average over cell i_min + k

  long i_max() const { return i_min + static_cast<long>(values.size()) - 1; }

  double at(long i) const {
    if (i < i_min || i > i_max()) {
      throw DomainOfDependenceError("cell index " + std::to_string(i) +
                                    " outside frame window [" +
                                    std::to_string(i_min) + ", " +
                                    std::to_string(i_max()) + "]");
    }
    return values[static_cast<size_t>(i - i_min)];
  }

  double& at(long i) {
    if (i < i_min || i > i_max()) {
      throw DomainOfDependenceError("cell index " + std::to_string(i) +
                                    " outside frame window [" +
                                    std::to_string(i_min) + ", " +
                                    std::to_string(i_max()) + "]");
    }
    return values[static_cast<size_t>(i - i_min)];
  }
};

inline FieldFrame zero_frame(const MeshSpec& mesh) {
  return {mesh.i_min, std::vector<double>(static_cast<size_t>(mesh.cells()), 0.0)};
}

// Full marching history u^0..u^n. The fractional stencil reaches all the way
// back to level 0, so every frame is retained for the lifetime of a run.
struct FieldHistory {
  MeshSpec mesh;
  std::vector<FieldFrame> frames;

  long levels() const { return static_cast<long>(frames.size()); }

  const FieldFrame& frame(long n) const {
    if (n < 0 || n >= levels()) {
      throw ConfigError("time level " + std::to_string(n) +
                        " not present in history of " + std::to_string(levels()) +
                        " frames");
    }
    return frames[static_cast<size_t>(n)];
  }
};

}  // namespace fmd
