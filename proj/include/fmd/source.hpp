#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fmd/core.hpp"
#include "fmd/mesh.hpp"
#include "fmd/special.hpp"

namespace fmd {

enum class SourceKind { PowerT, WaitFirst, JumpFirst, StandardLW, Sampled };

// Symbolic description of the forcing f(x,t). Keeping sources symbolic lets
// the solver consume exact cell averages even for Dirac and Heaviside data:
//
//   PowerT      f(x,t) = t^mu                              (x-independent)
//   WaitFirst   f(x,t) = t^{-alpha}/Gamma(1-alpha) * delta(x)
//   JumpFirst   f(x,t) = alpha*x^{-alpha-1}/Gamma(1-alpha) * H(x - t)
//   StandardLW  f(x,t) = t^{-alpha}/Gamma(1-alpha) * delta(x - t)
//   Sampled     arbitrary callable with declared compact x-support
struct SourceSpec {
  SourceKind kind = SourceKind::Sampled;
  double mu = 0.0;                            // PowerT only
  std::function<double(double, double)> fn;   // Sampled only, f(x, t)
  double support_lo = 0.0;                    // Sampled only
  double support_hi = 0.0;
  bool identically_zero = false;              // set by zero()

  static SourceSpec make(SourceKind kind) {
    SourceSpec s;
    s.kind = kind;
    return s;
  }
  static SourceSpec power_t(double mu) {
    if (!(mu > 0.0)) {
      throw ConfigError("PowerT exponent mu must be positive, got " +
                        std::to_string(mu));
    }
    SourceSpec s = make(SourceKind::PowerT);
    s.mu = mu;
    return s;
  }
  static SourceSpec wait_first() { return make(SourceKind::WaitFirst); }
  static SourceSpec jump_first() { return make(SourceKind::JumpFirst); }
  static SourceSpec standard_lw() { return make(SourceKind::StandardLW); }
  static SourceSpec sampled(std::function<double(double, double)> f,
                            double support_lo, double support_hi) {
    if (!f) throw ConfigError("Sampled source needs a callable");
    if (!(support_lo <= support_hi)) {
      throw ConfigError("Sampled source support interval is inverted");
    }
    SourceSpec s = make(SourceKind::Sampled);
    s.fn = std::move(f);
    s.support_lo = support_lo;
    s.support_hi = support_hi;
    return s;
  }
  static SourceSpec zero() {
    SourceSpec s = sampled([](double, double) { return 0.0; }, 0.0, 0.0);
    s.identically_zero = true;
    return s;
  }

  bool singular_in_time() const {
    return kind == SourceKind::WaitFirst || kind == SourceKind::JumpFirst ||
           kind == SourceKind::StandardLW;
  }
};

inline const char* source_kind_name(SourceKind k) {
  switch (k) {
    case SourceKind::PowerT: return "power-t";
    case SourceKind::WaitFirst: return "wait-first";
    case SourceKind::JumpFirst: return "jump-first";
    case SourceKind::StandardLW: return "standard";
    case SourceKind::Sampled: return "sampled";
  }
  return "?";
}

// (1/h) * integral of f(x, t_n) over cell i, in closed form per kind; the
// Sampled kind uses a 3-point Gauss rule on the cell. Time level n = 0 is
// rejected for the kinds carrying the t^{-alpha} factor.
inline double source_cell_average(const SourceSpec& source, long i, long n,
                                  const MeshSpec& mesh, AlphaParam alpha) {
  if (n < 0) throw ConfigError("negative time level");
  if (n == 0 && source.singular_in_time()) {
    throw ConfigError(
        "source kind with a t^{-alpha} factor cannot be evaluated at t = 0");
  }
  const double a = alpha.value;
  const double h = mesh.h;
  const double t = mesh.t(n);
  switch (source.kind) {
    case SourceKind::PowerT:
      return std::pow(t, source.mu);
    case SourceKind::WaitFirst:
      return mesh.cell_of(0.0) == i ? std::pow(t, -a) / (special_gamma(1.0 - a) * h)
                                    : 0.0;
    case SourceKind::StandardLW:
      return mesh.cell_of(t) == i ? std::pow(t, -a) / (special_gamma(1.0 - a) * h)
                                  : 0.0;
    case SourceKind::JumpFirst: {
      // integral of alpha*x^{-alpha-1} over the overlap of cell i with
      // (t, infinity); the antiderivative is -x^{-alpha}.
      const double lo = std::max(mesh.x(i) - 0.5 * h, t);
      const double hi = mesh.x(i) + 0.5 * h;
      if (!(hi > lo)) return 0.0;
      return (std::pow(lo, -a) - std::pow(hi, -a)) /
             (special_gamma(1.0 - a) * h);
    }
    case SourceKind::Sampled: {
      // 3-point Gauss-Legendre on the cell (exact through cubic variation).
      const double c = mesh.x(i);
      const double r = 0.5 * h;
      const double d = r * 0.7745966692414833770359;  // sqrt(3/5)
      // Pair the symmetric nodes before accumulating so a mirrored profile
      // on a mirrored mesh produces bitwise-identical averages.
      return (5.0 * (source.fn(c - d, t) + source.fn(c + d, t)) +
              8.0 * source.fn(c, t)) /
             18.0;
    }
  }
  throw ConfigError("unknown source kind");
}

// Inclusive cell-index support of the rows f(., t_n) for n in
// [n_first, n_last], with unbounded flags for kinds whose support cannot be
// enclosed (constant-in-x or heavy-tailed). Used by the marching domain-of-
// dependence check.
struct SupportCells {
  long lo = 0;
  long hi = -1;           // lo > hi encodes an identically-zero source
  bool lo_unbounded = false;
  bool hi_unbounded = false;
  bool empty() const { return !lo_unbounded && !hi_unbounded && lo > hi; }
};

inline SupportCells source_support_cells(const SourceSpec& source,
                                         const MeshSpec& mesh, long n_first,
                                         long n_last) {
  SupportCells s;
  switch (source.kind) {
    case SourceKind::PowerT:
      s.lo_unbounded = s.hi_unbounded = true;
      return s;
    case SourceKind::WaitFirst:
      s.lo = s.hi = mesh.cell_of(0.0);
      return s;
    case SourceKind::StandardLW:
      s.lo = mesh.cell_of(mesh.t(n_first));
      s.hi = mesh.cell_of(mesh.t(n_last));
      return s;
    case SourceKind::JumpFirst:
      // first cell whose right edge exceeds t_{n_first}; tail unbounded
      s.lo = mesh.cell_of(mesh.t(n_first));
      s.hi_unbounded = true;
      return s;
    case SourceKind::Sampled:
      if (source.identically_zero) return s;  // empty support
      // one cell of slack on each side; cell_of maps edge points downward
      s.lo = mesh.cell_of(source.support_lo) - 1;
      s.hi = mesh.cell_of(source.support_hi) + 1;
      return s;
  }
  throw ConfigError("unknown source kind");
}

// Rows of source cell averages over the mesh window, computed once per time
// level and shared between scheme variants in comparative runs.
class SourceCache {
 public:
  SourceCache(SourceSpec source, MeshSpec mesh, AlphaParam alpha)
      : source_(std::move(source)), mesh_(mesh), alpha_(alpha) {}

  const SourceSpec& source() const { return source_; }

  // Cell averages of f(., t_n) over [i_min, i_max].
  const std::vector<double>& row(long n) {
    auto it = rows_.find(n);
    if (it != rows_.end()) return it->second;
    std::vector<double> r(static_cast<size_t>(mesh_.cells()));
    for (long i = mesh_.i_min; i <= mesh_.i_max; ++i) {
      r[static_cast<size_t>(i - mesh_.i_min)] =
          source_cell_average(source_, i, n, mesh_, alpha_);
    }
    return rows_.emplace(n, std::move(r)).first->second;
  }

 private:
  SourceSpec source_;
  MeshSpec mesh_;
  AlphaParam alpha_;
  std::map<long, std::vector<double>> rows_;
};

}  // namespace fmd
