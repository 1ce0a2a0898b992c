#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "fmd/core.hpp"
#include "fmd/mesh.hpp"
#include "fmd/rng.hpp"
#include "fmd/stable.hpp"

namespace fmd {

// Lattice approximation of the inverse-subordinator pair: T(hk) is the
// running sum of scaled stable draws (the operational-time process) and
// motion(hk) is the walker position driven by the same draws. For the
// one-sided wait-first walk the two coincide; they are kept as separate
// series so a two-sided variant can reuse the draw sequence.
struct CoupledPaths {
  std::vector<double> times;   // T(hk), k = 0..K; times[0] = 0
  std::vector<double> motion;  // walker position at lattice index k
  std::vector<double> xi;      // the stable draws; xi[k] drives step k+1
};

// Simulates the coupled pair on lattice step h until the operational time
// passes the horizon T (so the last entry exceeds T). Throws ResourceError
// if the path would need more than max_steps lattice steps.
inline CoupledPaths simulate_coupled_paths(
    AlphaParam alpha, double h, double T, Rng& rng,
    std::uint64_t max_steps = 100'000'000) {
  if (!(h > 0.0)) throw ConfigError("lattice step h must be positive");
  if (!(T > 0.0)) throw ConfigError("horizon T must be positive");
  const double scale = std::pow(h, 1.0 / alpha.value);
  CoupledPaths path;
  path.times.push_back(0.0);
  path.motion.push_back(0.0);
  double t_acc = 0.0;
  double x_acc = 0.0;
  std::uint64_t steps = 0;
  while (t_acc <= T) {
    if (steps >= max_steps) {
      throw ResourceError("subordinator path exceeded its budget of " +
                          std::to_string(max_steps) +
                          " lattice steps before passing the horizon");
    }
    const double draw = sample_positive_stable(alpha, rng);
    path.xi.push_back(draw);
    t_acc += scale * draw;   // operational time: strictly increasing
    x_acc += scale * draw;   // one-sided walk: same increment
    path.times.push_back(t_acc);
    path.motion.push_back(x_acc);
    ++steps;
  }
  return path;
}

// Wait-first position at physical time t: with k* = min{ k : T(hk) > t },
// the walker sits at the position reached one lattice step earlier,
// motion(h (k*-1)) -- it is still waiting out the increment that carries
// the operational time past t.
inline double wait_first_position(const CoupledPaths& path, double t) {
  if (!(t >= 0.0)) throw ConfigError("time t must be non-negative");
  if (path.times.empty() || path.times.back() <= t) {
    throw ConfigError(
        "requested time lies beyond the simulated operational-time horizon");
  }
  const auto it =
      std::upper_bound(path.times.begin(), path.times.end(), t);
  const auto k_star = static_cast<size_t>(it - path.times.begin());
  // times[0] = 0 <= t, so k_star >= 1 and the predecessor index is valid.
  return path.motion[k_star - 1];
}

// Histogram density estimate on the mesh's cells. Counts are integers, so
// the merge across threads is exact and independent of scheduling; density
// is count / (n_trajectories * mesh.h) and all out-of-window samples land
// in overflow.
struct EmpiricalPdf {
  MeshSpec mesh;
  std::vector<std::int64_t> counts;  // one per mesh cell, i_min..i_max
  std::int64_t overflow_count = 0;
  std::uint64_t n_trajectories = 0;

  double density(long i) const {
    const auto idx = static_cast<size_t>(i - mesh.i_min);
    return static_cast<double>(counts[idx]) /
           (static_cast<double>(n_trajectories) * mesh.h);
  }
  double overflow_mass() const {
    return static_cast<double>(overflow_count) /
           static_cast<double>(n_trajectories);
  }
  FieldFrame density_frame() const {
    FieldFrame frame{mesh.i_min, std::vector<double>(counts.size(), 0.0)};
    for (size_t k = 0; k < counts.size(); ++k) {
      frame.values[k] = static_cast<double>(counts[k]) /
                        (static_cast<double>(n_trajectories) * mesh.h);
    }
    return frame;
  }
};

// Monte Carlo estimate of the wait-first position density at time t from
// n_traj independent trajectories. Trajectory j uses stream id j under the
// given seed, so the estimate is identical for every thread count; threads
// merge integer bin counts in fixed worker order. Per-trajectory resource
// errors are aggregated and reported once with their count.
inline EmpiricalPdf estimate_pdf(AlphaParam alpha, double h, double t,
                                 std::uint64_t n_traj, const MeshSpec& mesh,
                                 std::uint64_t seed, int n_threads = 1) {
  if (n_traj == 0) throw ConfigError("need at least one trajectory");
  if (!(t > 0.0)) throw ConfigError("time t must be positive");
  if (n_threads < 1) throw ConfigError("need at least one thread");

  const size_t n_cells = mesh.cells();
  EmpiricalPdf result{mesh, std::vector<std::int64_t>(n_cells, 0), 0, n_traj};

  const auto n_workers =
      static_cast<std::uint64_t>(std::min<std::uint64_t>(
          static_cast<std::uint64_t>(n_threads), n_traj));
  std::vector<std::vector<std::int64_t>> worker_counts(
      n_workers, std::vector<std::int64_t>(n_cells, 0));
  std::vector<std::int64_t> worker_overflow(n_workers, 0);
  std::vector<std::uint64_t> worker_failures(n_workers, 0);
  std::vector<std::exception_ptr> worker_error(n_workers, nullptr);

  auto run_range = [&](std::uint64_t w, std::uint64_t lo, std::uint64_t hi) {
    try {
      for (std::uint64_t j = lo; j < hi; ++j) {
        Rng rng(RngSeed{seed, j});
        double pos;
        try {
          const CoupledPaths path = simulate_coupled_paths(alpha, h, t, rng);
          pos = wait_first_position(path, t);
        } catch (const ResourceError&) {
          ++worker_failures[w];
          continue;
        }
        const long cell = mesh.cell_of(pos);
        if (mesh.contains(cell)) {
          ++worker_counts[w][static_cast<size_t>(cell - mesh.i_min)];
        } else {
          ++worker_overflow[w];
        }
      }
    } catch (...) {
      worker_error[w] = std::current_exception();
    }
  };

  if (n_workers == 1) {
    run_range(0, 0, n_traj);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const std::uint64_t chunk = (n_traj + n_workers - 1) / n_workers;
    for (std::uint64_t w = 0; w < n_workers; ++w) {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = std::min(n_traj, lo + chunk);
      pool.emplace_back(run_range, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  std::uint64_t failures = 0;
  for (std::uint64_t w = 0; w < n_workers; ++w) {
    if (worker_error[w]) std::rethrow_exception(worker_error[w]);
    for (size_t k = 0; k < n_cells; ++k) {
      result.counts[k] += worker_counts[w][k];
    }
    result.overflow_count += worker_overflow[w];
    failures += worker_failures[w];
  }
  if (failures > 0) {
    throw ResourceError(std::to_string(failures) + " of " +
                        std::to_string(n_traj) +
                        " trajectories exceeded the path-step budget");
  }
  return result;
}

}  // namespace fmd
