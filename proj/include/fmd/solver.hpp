#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fmd/core.hpp"
#include "fmd/l1.hpp"
#include "fmd/mesh.hpp"
#include "fmd/source.hpp"
#include "fmd/special.hpp"

namespace fmd {

// Which time level the source is evaluated at while computing level n:
// Standard uses f(., t_n); StepAheadSource delays to f(., t_{n+1}), which is
// what makes the scheme's discrete mass approach 1 from below instead of
// overshooting.
enum class SchemeVariant { Standard, StepAheadSource };

inline const char* scheme_variant_name(SchemeVariant v) {
  return v == SchemeVariant::Standard ? "standard" : "step-ahead";
}

struct InitialCondition {
  enum class Kind { Zero, DiscreteDirac, Sampled };
  Kind kind = Kind::Zero;
  double at = 0.0;                       // DiscreteDirac
  std::function<double(double)> fn;      // Sampled
  double support_lo = 0.0;               // Sampled
  double support_hi = 0.0;

  static InitialCondition zero() { return {}; }
  // Unit point mass: value 1/h in the unique cell containing `at`, so the
  // discrete mass h*sum|u^0| is exactly 1.
  static InitialCondition discrete_dirac(double at) {
    InitialCondition ic;
    ic.kind = Kind::DiscreteDirac;
    ic.at = at;
    return ic;
  }
  static InitialCondition sampled(std::function<double(double)> f,
                                  double support_lo, double support_hi) {
    if (!f) throw ConfigError("Sampled initial condition needs a callable");
    if (!(support_lo <= support_hi)) {
      throw ConfigError("Sampled initial condition support interval is inverted");
    }
    InitialCondition ic;
    ic.kind = Kind::Sampled;
    ic.fn = std::move(f);
    ic.support_lo = support_lo;
    ic.support_hi = support_hi;
    return ic;
  }
};

inline FieldFrame initial_frame(const InitialCondition& ic, const MeshSpec& mesh) {
  FieldFrame frame = zero_frame(mesh);
  switch (ic.kind) {
    case InitialCondition::Kind::Zero:
      return frame;
    case InitialCondition::Kind::DiscreteDirac: {
      const long cell = mesh.cell_of(ic.at);
      if (!mesh.contains(cell)) {
        throw ConfigError("point mass at x = " + std::to_string(ic.at) +
                          " falls in cell " + std::to_string(cell) +
                          " outside the mesh window");
      }
      frame.at(cell) = 1.0 / mesh.h;
      return frame;
    }
    case InitialCondition::Kind::Sampled: {
      const double r = 0.5 * mesh.h;
      const double d = r * 0.7745966692414833770359;  // sqrt(3/5)
      for (long i = mesh.i_min; i <= mesh.i_max; ++i) {
        const double c = mesh.x(i);
        // Pair the symmetric nodes before accumulating so a mirrored profile
        // on a mirrored mesh produces bitwise-identical averages.
        frame.at(i) =
            (5.0 * (ic.fn(c - d) + ic.fn(c + d)) + 8.0 * ic.fn(c)) / 18.0;
      }
      return frame;
    }
  }
  throw ConfigError("unknown initial condition kind");
}

namespace detail {

struct IcSupport {
  long lo = 0;
  long hi = -1;
  bool empty() const { return lo > hi; }
};

inline IcSupport ic_support_cells(const InitialCondition& ic, const MeshSpec& mesh) {
  switch (ic.kind) {
    case InitialCondition::Kind::Zero:
      return {};
    case InitialCondition::Kind::DiscreteDirac: {
      const long c = mesh.cell_of(ic.at);
      return {c, c};
    }
    case InitialCondition::Kind::Sampled:
      return {mesh.cell_of(ic.support_lo) - 1, mesh.cell_of(ic.support_hi) + 1};
  }
  return {};
}

// Verifies, before any marching, that every cell the true solution can touch
// is computed with its full stencil inside the window. Support spreads
// exactly one cell per step along the characteristic, and the source feeds
// target cells one cell on the upwind side of its own support. Sides on
// which the source support is unbounded (PowerT everywhere, the JumpFirst
// tail) cannot satisfy any finite window; there the zero fill is an explicit
// domain truncation and the check is skipped.
inline void check_domain_of_dependence(const InitialCondition& ic,
                                       const SourceSpec& source, Direction dir,
                                       const MeshSpec& mesh,
                                       SchemeVariant variant) {
  const long n_first = variant == SchemeVariant::StepAheadSource ? 2 : 1;
  const long n_last = variant == SchemeVariant::StepAheadSource
                          ? mesh.n_steps + 1
                          : mesh.n_steps;
  const SupportCells f = source_support_cells(source, mesh, n_first, n_last);
  const IcSupport u0 = ic_support_cells(ic, mesh);
  const int s = direction_sign(dir);

  const bool have_upwind =
      !(u0.empty() && f.empty()) && (s > 0 ? !f.lo_unbounded : !f.hi_unbounded);
  const bool have_downwind =
      !(u0.empty() && f.empty()) && (s > 0 ? !f.hi_unbounded : !f.lo_unbounded);

  if (have_upwind) {
    // Upwind edge of the true support (it never moves further upwind).
    long edge;
    if (s > 0) {
      edge = u0.empty() ? f.lo - 1 : (f.empty() ? u0.lo : std::min(u0.lo, f.lo - 1));
      const long need = mesh.i_min + mesh.n_steps;
      if (edge < need) {
        throw DomainOfDependenceError(
            "window too small on the upwind side: support cell " +
            std::to_string(edge) + " needs i_min <= " +
            std::to_string(edge - mesh.n_steps) + " (have " +
            std::to_string(mesh.i_min) + ")");
      }
    } else {
      edge = u0.empty() ? f.hi + 1 : (f.empty() ? u0.hi : std::max(u0.hi, f.hi + 1));
      const long need = mesh.i_max - mesh.n_steps;
      if (edge > need) {
        throw DomainOfDependenceError(
            "window too small on the upwind side: support cell " +
            std::to_string(edge) + " needs i_max >= " +
            std::to_string(edge + mesh.n_steps) + " (have " +
            std::to_string(mesh.i_max) + ")");
      }
    }
  }
  if (have_downwind) {
    if (s > 0) {
      const long edge =
          u0.empty() ? f.hi - 1 : (f.empty() ? u0.hi : std::max(u0.hi, f.hi - 1));
      if (edge + mesh.n_steps > mesh.i_max - 1) {
        throw DomainOfDependenceError(
            "window too small on the downwind side: support reaches cell " +
            std::to_string(edge + mesh.n_steps) + " after " +
            std::to_string(mesh.n_steps) + " steps but needs to stay <= " +
            std::to_string(mesh.i_max - 1));
      }
    } else {
      const long edge =
          u0.empty() ? f.lo + 1 : (f.empty() ? u0.lo : std::min(u0.lo, f.lo + 1));
      if (edge - mesh.n_steps < mesh.i_min + 1) {
        throw DomainOfDependenceError(
            "window too small on the downwind side: support reaches cell " +
            std::to_string(edge - mesh.n_steps) + " after " +
            std::to_string(mesh.n_steps) + " steps but needs to stay >= " +
            std::to_string(mesh.i_min + 1));
      }
    }
  }
}

}  // namespace detail

// One marching level. With n = history.levels() (the level being produced),
// the Plus-direction update for every target cell m whose full stencil lies
// inside the window is
//
//   u^n_m = sum_{j=0}^{n-1} (b_{n-j} - b_{n-j+1}) u^j_{m-(n-j)}
//           + h^alpha Gamma(2-alpha) f^{n or n+1}_{m+1},
//
// the Minus direction is the exact mirror, and cells whose stencil would
// leave the window on the upwind side are filled with 0 (legitimate because
// march() verifies a priori that the true support never reaches them). The
// j-ascending accumulation order is identical for both directions, so
// mirrored inputs produce bitwise-mirrored output.
inline FieldFrame step(const FieldHistory& history, SourceCache& source,
                       Direction dir, AlphaParam alpha, const MeshSpec& mesh,
                       SchemeVariant variant, const L1Coefficients& coeffs) {
  const long n = history.levels();
  if (n < 1) throw ConfigError("history must contain the initial frame");
  if (n > mesh.n_steps) {
    throw ConfigError("mesh allows " + std::to_string(mesh.n_steps) +
                      " steps; cannot compute level " + std::to_string(n));
  }
  if (coeffs.max_index() < n + 1) {
    throw ConfigError("L1 coefficients end at index " +
                      std::to_string(coeffs.max_index()) +
                      "; marching level " + std::to_string(n) + " needs " +
                      std::to_string(n + 1));
  }
  if (history.mesh.i_min != mesh.i_min || history.mesh.i_max != mesh.i_max ||
      history.mesh.h != mesh.h) {
    throw ConfigError("history window does not match the supplied mesh");
  }

  const long M = mesh.cells();
  FieldFrame out = zero_frame(mesh);
  const int s = direction_sign(dir);

  // Local (0-based) range of target cells with a complete in-window stencil.
  const long k_lo = s > 0 ? n : 1;
  const long k_hi = s > 0 ? M - 2 : M - 1 - n;
  if (k_lo > k_hi) return out;

  double* __restrict dst = out.values.data();
  for (long j = 0; j < n; ++j) {
    const double w = coeffs.weight(n, j);
    const double* __restrict src =
        history.frames[static_cast<size_t>(j)].values.data();
    const long off = s * (n - j);  // stays in range for k in [k_lo, k_hi]
    for (long k = k_lo; k <= k_hi; ++k) dst[k] += w * src[k - off];
  }
  const double scale =
      std::pow(mesh.h, alpha.value) * special_gamma(2.0 - alpha.value);
  const long src_level = variant == SchemeVariant::StepAheadSource ? n + 1 : n;
  const double* __restrict f = source.row(src_level).data();
  for (long k = k_lo; k <= k_hi; ++k) dst[k] += scale * f[k + s];

#ifndef NDEBUG
  for (long k = 0; k < M; ++k) assert(std::isfinite(dst[k]));
#endif
  return out;
}

// Full explicit march over mesh.n_steps levels; exactly the fold of step().
// The L1 coefficients are computed once for the whole run and the domain-of-
// dependence check runs before any work. The SourceCache overload lets
// comparative runs (both variants on one problem) reuse the same exact
// source rows.
inline FieldHistory march(const InitialCondition& ic, SourceCache& source,
                          Direction dir, AlphaParam alpha, const MeshSpec& mesh,
                          SchemeVariant variant) {
  detail::check_domain_of_dependence(ic, source.source(), dir, mesh, variant);
  const L1Coefficients coeffs = l1_coefficients(alpha, mesh.n_steps + 1);
  FieldHistory history{mesh, {}};
  history.frames.reserve(static_cast<size_t>(mesh.n_steps) + 1);
  history.frames.push_back(initial_frame(ic, mesh));
  for (long n = 1; n <= mesh.n_steps; ++n) {
    history.frames.push_back(
        step(history, source, dir, alpha, mesh, variant, coeffs));
  }
  return history;
}

inline FieldHistory march(const InitialCondition& ic, const SourceSpec& source,
                          Direction dir, AlphaParam alpha, const MeshSpec& mesh,
                          SchemeVariant variant) {
  SourceCache cache(source, mesh, alpha);
  return march(ic, cache, dir, alpha, mesh, variant);
}

}  // namespace fmd
