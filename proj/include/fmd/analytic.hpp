#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/special_functions/beta.hpp>

#include "fmd/core.hpp"
#include "fmd/mesh.hpp"
#include "fmd/quadrature.hpp"
#include "fmd/source.hpp"
#include "fmd/special.hpp"

namespace fmd {

// Regularized incomplete beta function I_x(a,b), clamped outside [0,1].
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

// ---------------------------------------------------------------------------
// Closed-form walk densities at time t.
//
// Pointwise values are only defined strictly inside the support; on the
// boundary (where the formulas blow up like x^{alpha-1} or (t-x)^{-alpha})
// the functions return 0, and all quantitative comparisons go through the
// exact cell averages below, which integrate the singularity.
// ---------------------------------------------------------------------------

// Wait-first walk density sin(pi a)/pi * x^{a-1} (t-x)^{-a} on 0 < x < t.
inline double pdf_wait_first(double x, double t, AlphaParam alpha) {
  if (!(t > 0.0)) throw ConfigError("pdf_wait_first requires t > 0");
  if (!(x > 0.0) || !(x < t)) return 0.0;
  const double a = alpha.value;
  return std::sin(constants::pi * a) / constants::pi * std::pow(x, a - 1.0) *
         std::pow(t - x, -a);
}

// Its distribution function: I_{x/t}(alpha, 1-alpha).
inline double cdf_wait_first(double x, double t, AlphaParam alpha) {
  if (!(t > 0.0)) throw ConfigError("cdf_wait_first requires t > 0");
  return regularized_incomplete_beta(alpha.value, 1.0 - alpha.value, x / t);
}

// Jump-first walk density sin(pi a)/pi * (1/x) (t/(x-t))^a on x > t.
inline double pdf_jump_first(double x, double t, AlphaParam alpha) {
  if (!(t > 0.0)) throw ConfigError("pdf_jump_first requires t > 0");
  if (!(x > t)) return 0.0;
  const double a = alpha.value;
  return std::sin(constants::pi * a) / constants::pi / x *
         std::pow(t / (x - t), a);
}

// Its distribution function: I_{(x-t)/x}(1-alpha, alpha).
inline double cdf_jump_first(double x, double t, AlphaParam alpha) {
  if (!(t > 0.0)) throw ConfigError("cdf_jump_first requires t > 0");
  if (!(x > t)) return 0.0;
  return regularized_incomplete_beta(1.0 - alpha.value, alpha.value,
                                     (x - t) / x);
}

// Exact cell average of pdf_wait_first over mesh cell i (difference of the
// distribution function across the cell edges).
inline double pdf_wait_first_cell_average(long i, double t, AlphaParam alpha,
                                          const MeshSpec& mesh) {
  const double lo = mesh.x(i) - 0.5 * mesh.h;
  const double hi = mesh.x(i) + 0.5 * mesh.h;
  return (cdf_wait_first(hi, t, alpha) - cdf_wait_first(lo, t, alpha)) / mesh.h;
}

// Exact cell average of pdf_jump_first over mesh cell i.
inline double pdf_jump_first_cell_average(long i, double t, AlphaParam alpha,
                                          const MeshSpec& mesh) {
  const double lo = mesh.x(i) - 0.5 * mesh.h;
  const double hi = mesh.x(i) + 0.5 * mesh.h;
  return (cdf_jump_first(hi, t, alpha) - cdf_jump_first(lo, t, alpha)) / mesh.h;
}

// Cell average of the standard-walk density delta(x - t): 1/h in the unique
// cell containing t (pointwise values of a point mass are never produced).
inline double pdf_standard(long cell, double t, const MeshSpec& mesh) {
  if (!(t > 0.0)) throw ConfigError("pdf_standard requires t > 0");
  return mesh.cell_of(t) == cell ? 1.0 / mesh.h : 0.0;
}

// ---------------------------------------------------------------------------
// Normalization checks, by quadrature of the densities themselves.
// ---------------------------------------------------------------------------

struct NormalizationReport {
  double window_integral;  // quadrature over [support start, x_max]
  double tail_bound;       // analytic bound on the truncated tail mass
  double x_max;            // truncation point (= support end when no tail)
  double error_estimate;   // quadrature error estimate
  double total() const { return window_integral + tail_bound; }
};

// integral_0^t pdf_wait_first dx, computed by splitting at t/2 and removing
// each endpoint singularity with a power substitution (x = (t/2) w^{1/a} on
// the left, t - x = (t/2) w^{1/(1-a)} on the right), leaving two smooth
// integrands. No tail: the support is bounded.
inline NormalizationReport pdf_wait_first_normalization(AlphaParam alpha,
                                                        double t, double tol) {
  if (!(t > 0.0)) throw ConfigError("normalization requires t > 0");
  const double a = alpha.value;
  const double c = std::sin(constants::pi * a) / constants::pi;
  const double half = 0.5 * t;

  // left: x = half * w^{1/a};  pdf dx -> c/a * half^a * w^{...} smooth form
  auto left = [&](double w) {
    const double x = half * std::pow(w, 1.0 / a);
    // x^{a-1} dx = (half^a / a) dw exactly; the remaining factor is smooth
    return c / a * std::pow(half, a) * std::pow(t - x, -a);
  };
  // right: t - x = half * w^{1/(1-a)}
  auto right = [&](double w) {
    const double d = half * std::pow(w, 1.0 / (1.0 - a));
    return c / (1.0 - a) * std::pow(half, 1.0 - a) * std::pow(t - d, a - 1.0);
  };
  auto ql = integrate_adaptive(left, 0.0, 1.0, 0.5 * tol);
  auto qr = integrate_adaptive(right, 0.0, 1.0, 0.5 * tol);
  return {ql.value + qr.value, 0.0, t, ql.error_estimate + qr.error_estimate};
}

// Bound on integral_X^inf pdf_jump_first dx (uses 1/x <= 1/(x-t)):
//   sin(pi a)/(pi a) * (t/(X-t))^a.
inline double pdf_jump_first_tail_bound(AlphaParam alpha, double t, double x_max) {
  const double a = alpha.value;
  if (!(x_max > t)) return 1.0;
  return std::sin(constants::pi * a) / (constants::pi * a) *
         std::pow(t / (x_max - t), a);
}

// integral_t^inf pdf_jump_first dx: quadrature over [t, x_max] with the
// substitution x = t (1 + z^{1/(1-a)}), which removes the (x-t)^{-a} edge
// singularity exactly (integrand becomes c/(1-a) * t/x, smooth and
// decaying), plus the analytic tail bound added for the truncated part. The
// truncation point is chosen so the tail bound itself is <= tol/2, and the
// bound overestimates the true tail only by O(tail * t/x_max).
inline NormalizationReport pdf_jump_first_normalization(AlphaParam alpha,
                                                        double t, double tol) {
  if (!(t > 0.0)) throw ConfigError("normalization requires t > 0");
  const double a = alpha.value;
  const double c = std::sin(constants::pi * a) / constants::pi;

  // tail bound = tol/2  =>  (t/(X-t))^a = tol/2 * pi a / sin(pi a)
  const double target = 0.5 * tol * constants::pi * a / std::sin(constants::pi * a);
  const double x_max = t * (1.0 + std::pow(target, -1.0 / a));
  const double z_max = std::pow((x_max - t) / t, 1.0 - a);

  auto integrand = [&](double z) {
    const double x = t * (1.0 + std::pow(z, 1.0 / (1.0 - a)));
    return c / (1.0 - a) * t / x;
  };
  auto q = integrate_adaptive(integrand, 0.0, z_max, 0.25 * tol, 20000);
  return {q.value, pdf_jump_first_tail_bound(alpha, t, x_max), x_max,
          q.error_estimate};
}

// ---------------------------------------------------------------------------
// Solvability condition: the solution of the one-sided density problem stays
// a probability density iff  integral f(x,t) dx = t^{-alpha}/Gamma(1-alpha).
// ---------------------------------------------------------------------------

struct SolvabilityResult {
  double integral;  // integral of f(., t) over the real line
  double target;    // t^{-alpha}/Gamma(1-alpha)
  bool satisfied;   // |integral - target| <= tol * target
};

inline SolvabilityResult solvability_integral(const SourceSpec& source,
                                              double t, AlphaParam alpha,
                                              double tol) {
  if (!(t > 0.0)) throw ConfigError("solvability check requires t > 0");
  const double a = alpha.value;
  const double target = std::pow(t, -a) / special_gamma(1.0 - a);
  double integral = 0.0;
  switch (source.kind) {
    case SourceKind::WaitFirst:
    case SourceKind::StandardLW:
      // point mass of weight t^{-alpha}/Gamma(1-alpha)
      integral = target;
      break;
    case SourceKind::JumpFirst:
      // integral_t^inf alpha x^{-alpha-1} dx = t^{-alpha}, exactly
      integral = std::pow(t, -a) / special_gamma(1.0 - a);
      break;
    case SourceKind::PowerT:
      // constant in x: not integrable over the line
      integral = std::numeric_limits<double>::infinity();
      break;
    case SourceKind::Sampled: {
      auto g = [&](double x) { return source.fn(x, t); };
      integral = integrate_adaptive(g, source.support_lo, source.support_hi,
                                    tol * target)
                     .value;
      break;
    }
  }
  const bool ok =
      std::isfinite(integral) && std::abs(integral - target) <= tol * target;
  return {integral, target, ok};
}

// ---------------------------------------------------------------------------
// General initial-value problem and its closed-form solution
//   u(x,t) = t^{alpha-1}/Gamma(alpha) * phi(x -+ t)
//            + 1/Gamma(alpha) integral_0^t (t-s)^{alpha-1} f(x -+ (t-s), s) ds
// where phi is the fractional trace lim_{t->0+} I^{1-alpha}_t u.
// ---------------------------------------------------------------------------

struct GeneralIVP {
  AlphaParam alpha;
  Direction dir;
  SourceSpec source;
  std::function<double(double)> phi;  // empty means phi == 0
  double T;

  GeneralIVP(AlphaParam alpha_, Direction dir_, SourceSpec source_,
             std::function<double(double)> phi_, double T_)
      : alpha(alpha_),
        dir(dir_),
        source(std::move(source_)),
        phi(std::move(phi_)),
        T(T_) {
    if (!(T > 0.0)) throw ConfigError("horizon T must be positive");
    const bool density_kind = source.kind == SourceKind::WaitFirst ||
                              source.kind == SourceKind::JumpFirst ||
                              source.kind == SourceKind::StandardLW;
    if (density_kind && phi) {
      throw ConfigError(
          "density problems fix the trace phi == 0; pass an empty callable");
    }
  }
};

// Evaluates the solution formula at (x, t), t in (0, T].
//
// Point-mass sources are sifted analytically: the Dirac line hits the
// characteristic through (x,t) in at most one point s*, contributing
// (t-s*)^{alpha-1} w(s*) / |J| when s* lies in (0,t) and 0 otherwise (a miss
// is a value, not an error). For the StandardLW source in the Plus
// direction the Dirac line is parallel to the characteristic: the solution
// is the transported point mass delta(x-t) itself, so the pointwise value is
// 0 off the line x = t and +infinity on it.
//
// Regular sources go through adaptive quadrature after the substitution
// s = t(1 - w^{1/alpha}), which removes the (t-s)^{alpha-1} kernel
// singularity exactly; the JumpFirst/Minus combination additionally splits
// at the known Heaviside breakpoint.
inline double general_solution(const GeneralIVP& ivp, double x, double t,
                               double tol) {
  if (!(t > 0.0)) throw ConfigError("general_solution requires t > 0");
  if (t > ivp.T) {
    throw ConfigError("evaluation time " + std::to_string(t) +
                      " beyond the problem horizon " + std::to_string(ivp.T));
  }
  const double a = ivp.alpha.value;
  const int s = direction_sign(ivp.dir);
  const double ga = special_gamma(a);

  double value = 0.0;
  if (ivp.phi) {
    value += std::pow(t, a - 1.0) / ga * ivp.phi(x - s * t);
  }

  const double sin_term = std::sin(constants::pi * a) / constants::pi;
  switch (ivp.source.kind) {
    case SourceKind::WaitFirst: {
      // delta(y) on the characteristic y = x - s(t - sigma): sigma* = t - s x
      const double sigma = t - s * x;
      if (sigma > 0.0 && sigma < t) {
        value += sin_term * std::pow(t - sigma, a - 1.0) * std::pow(sigma, -a);
      }
      return value;
    }
    case SourceKind::StandardLW: {
      if (s > 0) {
        // support line parallel to the characteristic
        if (x == t) return std::numeric_limits<double>::infinity();
        return value;
      }
      // Minus: delta(x + t - 2 sigma), Jacobian 1/2
      const double sigma = 0.5 * (x + t);
      if (sigma > 0.0 && sigma < t) {
        value +=
            0.5 * sin_term * std::pow(t - sigma, a - 1.0) * std::pow(sigma, -a);
      }
      return value;
    }
    default:
      break;
  }

  // Regular source: t^alpha/Gamma(alpha+1) * integral_0^1 f(y(w), s(w)) dw
  // with s(w) = t(1 - w^{1/alpha}), y(w) = x - s_dir * t w^{1/alpha}.
  auto integrand = [&](double w) {
    const double r = t * std::pow(w, 1.0 / a);
    const double sv = t - r;
    const double y = x - s * r;
    switch (ivp.source.kind) {
      case SourceKind::PowerT:
        return std::pow(sv, ivp.source.mu);
      case SourceKind::JumpFirst: {
        if (!(y > sv)) return 0.0;
        return ivp.alpha.value * std::pow(y, -a - 1.0) /
               special_gamma(1.0 - a);
      }
      case SourceKind::Sampled:
        return ivp.source.fn(y, sv);
      default:
        return 0.0;
    }
  };

  const double prefactor = std::pow(t, a) / special_gamma(a + 1.0);
  const double inner_tol = tol / std::max(prefactor, 1.0);

  double integral = 0.0;
  double breakpoint = -1.0;
  if (ivp.source.kind == SourceKind::JumpFirst) {
    // H(y - sigma) flips where y(w) = s(w):
    //   Plus:  y - sigma = x - t (constant; nothing to split)
    //   Minus: y - sigma = x - t + 2 t w^{1/alpha} = 0
    if (s > 0) {
      if (!(x > t)) return value;  // integrand identically 0
    } else {
      const double arg = (t - x) / (2.0 * t);
      if (arg >= 1.0) return value;
      if (arg > 0.0) breakpoint = std::pow(arg, a);
    }
  }
  if (breakpoint > 0.0 && breakpoint < 1.0) {
    integral = integrate_adaptive(integrand, 0.0, breakpoint, 0.5 * inner_tol).value +
               integrate_adaptive(integrand, breakpoint, 1.0, 0.5 * inner_tol).value;
  } else {
    integral = integrate_adaptive(integrand, 0.0, 1.0, inner_tol).value;
  }
  return value + prefactor * integral;
}

}  // namespace fmd
