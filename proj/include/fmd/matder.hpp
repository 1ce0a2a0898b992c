#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fmd/core.hpp"
#include "fmd/l1.hpp"
#include "fmd/mesh.hpp"
#include "fmd/quadrature.hpp"
#include "fmd/special.hpp"

namespace fmd {

// Discrete fractional material derivative at cell i, time level n >= 1:
//
//   h^{-alpha}/Gamma(2-alpha) *
//       [ u^n_{i-+1} - sum_{j=0}^{n-1} (b_{n-j} - b_{n-j+1}) u^j_{i-+(n-j+1)} ]
//
// with the upper sign for Plus. The shift from cell i to i-+1 is the upwind
// flux approximation; the history samples follow the unit-slope
// characteristic through (x_i, t_n). `coeffs` must extend to index n+1.
inline double discrete_matder(const FieldHistory& history, long i, long n,
                              Direction dir, AlphaParam alpha,
                              const MeshSpec& mesh,
                              const L1Coefficients& coeffs) {
  if (n < 1) throw ConfigError("discrete_matder requires time level n >= 1");
  if (history.levels() <= n) {
    throw ConfigError("history holds " + std::to_string(history.levels()) +
                      " frames, need levels 0.." + std::to_string(n));
  }
  if (coeffs.max_index() < n + 1) {
    throw ConfigError("L1 coefficients end at index " +
                      std::to_string(coeffs.max_index()) + ", need " +
                      std::to_string(n + 1));
  }
  const int s = direction_sign(dir);
  auto require_cell = [&](long idx) {
    if (!mesh.contains(idx)) {
      throw DomainOfDependenceError(
          "stencil cell " + std::to_string(idx) + " at time level " +
          std::to_string(n) + " lies outside the window [" +
          std::to_string(mesh.i_min) + ", " + std::to_string(mesh.i_max) + "]");
    }
  };

  require_cell(i - s);
  double acc = history.frames[static_cast<size_t>(n)].at(i - s);
  for (long j = 0; j < n; ++j) {
    const long idx = i - s * (n - j + 1);
    require_cell(idx);
    acc -= coeffs.weight(n, j) * history.frames[static_cast<size_t>(j)].at(idx);
  }
  return acc * std::pow(mesh.h, -alpha.value) / special_gamma(2.0 - alpha.value);
}

// Convenience overload; for repeated evaluation precompute the coefficients
// once and use the overload above.
inline double discrete_matder(const FieldHistory& history, long i, long n,
                              Direction dir, AlphaParam alpha,
                              const MeshSpec& mesh) {
  return discrete_matder(history, i, n, dir, alpha, mesh,
                         l1_coefficients(alpha, n + 1));
}

// Pointwise fractional material derivative through its integral
// representation
//
//   D^alpha_+- u(x,t) = 1/Gamma(1-alpha) * d/dtau
//       integral_0^tau (tau - s)^{-alpha} U(s) ds     at tau = t,
//
// where U(s) = u(x -+ (t-s), s) is the trace of u along the characteristic
// through (x,t). The kernel singularity is removed exactly by substituting
// s = tau*(1 - w^{1/(1-alpha)}), which rewrites the integral as
//
//   tau^{1-alpha}/(1-alpha) * Q(tau),
//   Q(tau) = integral_0^1 U(tau*(1 - w^{1/(1-alpha)})) dw,
//
// so that the tau-derivative becomes
//
//   D = [ t^{-alpha} Q(t) + t^{1-alpha}/(1-alpha) * Q'(t) ] / Gamma(1-alpha).
//
// Q' is approximated by the fourth-order five-point central difference with
// step h_d ~ tol^{1/4}, and its truncation is estimated by Richardson
// comparison against the same rule at step 2 h_d (the comparison costs two
// extra Q evaluations at t +- 4 h_d). Traveling waves have constant Q, so
// their difference truncation vanishes identically. The combined estimate
// (difference truncation + quadrature + rounding amplification) must come in
// at or below tol or the call throws AccuracyError carrying the estimate.
template <class U>
double matder_quadrature_oracle(const U& u, double x, double t, Direction dir,
                                AlphaParam alpha, double tol) {
  if (!(t > 0.0)) throw ConfigError("oracle requires t > 0");
  if (!(tol > 0.0)) throw ConfigError("oracle tolerance must be positive");
  const double a = alpha.value;
  const int s = direction_sign(dir);
  const double p = 1.0 / (1.0 - a);

  const double hd =
      std::min(std::pow(tol, 0.25) * std::max(1.0, t), 0.125 * t);

  // Tolerance per Q evaluation: keep the quadrature contribution to the
  // final value (including the ~1.5/hd amplification through Q') well below
  // tol. The 1e-15 floor is the realistic absolute accuracy of the rule.
  const double q_tol = std::max(0.1 * tol * std::min(1.0, hd), 1e-15);

  double q_err_max = 0.0;
  double q_abs_max = 0.0;
  auto q_at = [&](double tau) {
    auto integrand = [&](double w) {
      const double sv = tau * (1.0 - std::pow(w, p));
      return u(x - s * (t - sv), sv);
    };
    const auto r = integrate_adaptive(integrand, 0.0, 1.0, q_tol);
    q_err_max = std::max(q_err_max, r.error_estimate);
    q_abs_max = std::max(q_abs_max, std::abs(r.value));
    return r.value;
  };

  const double q0 = q_at(t);
  const double qp1 = q_at(t + hd), qm1 = q_at(t - hd);
  const double qp2 = q_at(t + 2.0 * hd), qm2 = q_at(t - 2.0 * hd);
  const double qp4 = q_at(t + 4.0 * hd), qm4 = q_at(t - 4.0 * hd);

  const double d1 = (8.0 * (qp1 - qm1) - (qp2 - qm2)) / (12.0 * hd);
  const double d2 = (8.0 * (qp2 - qm2) - (qp4 - qm4)) / (24.0 * hd);

  const double pref0 = std::pow(t, -a) / special_gamma(1.0 - a);
  const double pref1 =
      std::pow(t, 1.0 - a) / ((1.0 - a) * special_gamma(1.0 - a));

  const double est_trunc = pref1 * std::abs(d1 - d2) / 15.0;
  const double est_quad =
      pref0 * q_err_max + pref1 * 1.5 * q_err_max / hd;
  const double est_round = pref1 * 1.5 *
                           std::numeric_limits<double>::epsilon() *
                           q_abs_max / hd;
  const double est = est_trunc + est_quad + est_round;
  if (est > tol) {
    throw AccuracyError("fractional material derivative oracle error "
                        "estimate " +
                            std::to_string(est) + " exceeds requested " +
                            std::to_string(tol),
                        est);
  }
  return pref0 * q0 + pref1 * d1;
}

}  // namespace fmd
