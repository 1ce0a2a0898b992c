#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fmd/core.hpp"
#include "fmd/mesh.hpp"

namespace fmd {

enum class NormType { L1, L2, LInf };

inline const char* norm_name(NormType p) {
  switch (p) {
    case NormType::L1: return "l1";
    case NormType::L2: return "l2";
    case NormType::LInf: return "linf";
  }
  return "?";
}

// Discrete norm of one frame: (h * sum |u_i|^p)^{1/p} for p in {1,2},
// max |u_i| for the sup norm.
inline double discrete_norm(const FieldFrame& frame, NormType p, double h) {
  double acc = 0.0;
  switch (p) {
    case NormType::L1:
      for (double v : frame.values) acc += std::abs(v);
      return h * acc;
    case NormType::L2:
      for (double v : frame.values) acc += v * v;
      return std::sqrt(h * acc);
    case NormType::LInf:
      for (double v : frame.values) acc = std::max(acc, std::abs(v));
      return acc;
  }
  throw ConfigError("unknown norm");
}

// Norm of (u^n - reference) where `reference` maps a cell index to the
// reference cell average at time level n. Reference evaluation failures
// (e.g. quadrature budget) propagate unchanged.
template <class Ref>
double error_vs_reference(const FieldHistory& history, const Ref& reference,
                          long n, NormType p, double h) {
  const FieldFrame& frame = history.frame(n);
  FieldFrame diff = frame;
  for (long i = frame.i_min; i <= frame.i_max(); ++i) {
    diff.at(i) = frame.at(i) - reference(i);
  }
  return discrete_norm(diff, p, h);
}

// Discrete L1 norm per time level: the mass series of a run.
inline std::vector<double> mass_series(const FieldHistory& history, double h) {
  std::vector<double> mass;
  mass.reserve(history.frames.size());
  for (const auto& frame : history.frames) {
    mass.push_back(discrete_norm(frame, NormType::L1, h));
  }
  return mass;
}

// Least-squares power-law fit e = C h^r on log2-log2 axes.
struct RateFit {
  double rate;                 // fitted slope r
  double residual;             // root-mean-square residual of the fit
  bool coarsest_excluded;      // pre-asymptotic coarsest point dropped?
  double h_min;                // h-range the rate was fitted on
  double h_max;
  int points_used;
};

namespace detail {

struct LineFit {
  double slope;
  double rms_residual;
  std::vector<double> sq_residuals;
};

inline LineFit fit_line(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < n; ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ConfigError("degenerate abscissas in rate fit");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  LineFit fit{slope, 0.0, {}};
  fit.sq_residuals.resize(n);
  double ssr = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const double r = ys[k] - (intercept + slope * xs[k]);
    fit.sq_residuals[k] = r * r;
    ssr += r * r;
  }
  fit.rms_residual = std::sqrt(ssr / n);
  return fit;
}

}  // namespace detail

// Fits the convergence rate r from (h, error) pairs; needs at least three
// points, all errors positive. When four or more points are available and
// the coarsest point's squared residual exceeds three times the mean (it is
// still pre-asymptotic), the fit is repeated without it and the exclusion is
// recorded in the result.
inline RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) {
    throw ConfigError("rate fit needs at least three (h, error) points");
  }
  std::vector<std::pair<double, double>> sorted = points;
  std::sort(sorted.begin(), sorted.end());  // ascending h; coarsest last
  std::vector<double> xs, ys;
  for (const auto& [h, e] : sorted) {
    if (!(h > 0.0) || !(e > 0.0)) {
      throw ConfigError("rate fit needs positive h and positive errors");
    }
    xs.push_back(std::log2(h));
    ys.push_back(std::log2(e));
  }
  auto fit = detail::fit_line(xs, ys);
  bool excluded = false;
  if (sorted.size() >= 4) {
    double mean_sq = 0.0;
    for (double s : fit.sq_residuals) mean_sq += s;
    mean_sq /= fit.sq_residuals.size();
    if (mean_sq > 0.0 && fit.sq_residuals.back() > 3.0 * mean_sq) {
      xs.pop_back();
      ys.pop_back();
      sorted.pop_back();
      fit = detail::fit_line(xs, ys);
      excluded = true;
    }
  }
  return {fit.slope,          fit.rms_residual, excluded,
          sorted.front().first, sorted.back().first,
          static_cast<int>(sorted.size())};
}

// Median wall-clock seconds of `reps` runs of fn, on the monotonic clock.
template <class Fn>
double median_seconds(const Fn& fn, int reps = 3) {
  if (reps < 1) throw ConfigError("need at least one timing repetition");
  std::vector<double> times;
  times.reserve(static_cast<size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::sort(times.begin(), times.end());
  return times[static_cast<size_t>(reps) / 2];
}

struct TimingComparison {
  double fv_seconds;
  double mc_seconds;
  double ratio;  // mc / fv
};

// Times two workloads (median of `reps` each) on the same thread budget.
template <class FvFn, class McFn>
TimingComparison timing_compare(const FvFn& fv, const McFn& mc, int reps = 3) {
  TimingComparison t{};
  t.fv_seconds = median_seconds(fv, reps);
  t.mc_seconds = median_seconds(mc, reps);
  t.ratio = t.mc_seconds / t.fv_seconds;
  return t;
}

}  // namespace fmd
