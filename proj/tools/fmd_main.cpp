// Command-line front end: configure runs, execute the marching solver, the
// Monte Carlo estimator, and analytic comparisons, and emit machine-readable
// results (CSV tables plus a JSON sidecar per command).
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-accuracy error
// (including a window that cannot hold the domain of dependence), 4 resource
// exhaustion.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmd/fmd.hpp"

namespace {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Run configuration. Everything a command needs is in here, and the sidecar
// JSON echoes it verbatim, so a run can be reproduced from its own artifact.
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string command;
  std::vector<double> alphas;         // one entry except for converge sweeps
  std::string direction = "plus";     // plus | minus
  std::string source = "wait-first";  // wait-first|jump-first|standard|power-t|zero
  double mu = 2.0;                    // exponent of the power-t source
  std::string ic = "zero";            // zero | dirac
  double ic_at = 0.0;                 // location of the point mass
  std::vector<double> hs;             // one entry except for converge sweeps
  double T = 1.0;
  std::string variant = "standard";   // standard | step-ahead
  std::uint64_t n_traj = 1000000;
  std::uint64_t seed = 12345;
  std::string out;                    // output directory ("" -> env/cwd)
  int threads = 0;                    // 0 -> hardware concurrency
  int reps = 3;                       // timing repetitions (compare)
  bool all_frames = false;            // solve: also write every level
};

ordered_json config_to_json(const RunConfig& c) {
  return ordered_json{{"command", c.command},
                      {"alpha", c.alphas},
                      {"direction", c.direction},
                      {"source", c.source},
                      {"mu", c.mu},
                      {"ic", c.ic},
                      {"ic_at", c.ic_at},
                      {"h", c.hs},
                      {"T", c.T},
                      {"variant", c.variant},
                      {"n_traj", c.n_traj},
                      {"seed", c.seed},
                      {"out", c.out},
                      {"threads", c.threads},
                      {"reps", c.reps},
                      {"all_frames", c.all_frames}};
}

RunConfig config_from_json(const ordered_json& j) {
  RunConfig c;
  j.at("command").get_to(c.command);
  j.at("alpha").get_to(c.alphas);
  j.at("direction").get_to(c.direction);
  j.at("source").get_to(c.source);
  j.at("mu").get_to(c.mu);
  j.at("ic").get_to(c.ic);
  j.at("ic_at").get_to(c.ic_at);
  j.at("h").get_to(c.hs);
  j.at("T").get_to(c.T);
  j.at("variant").get_to(c.variant);
  j.at("n_traj").get_to(c.n_traj);
  j.at("seed").get_to(c.seed);
  j.at("out").get_to(c.out);
  j.at("threads").get_to(c.threads);
  j.at("reps").get_to(c.reps);
  j.at("all_frames").get_to(c.all_frames);
  return c;
}

// ---------------------------------------------------------------------------
// Token -> enum translation.
// ---------------------------------------------------------------------------

fmd::Direction parse_direction(const std::string& s) {
  if (s == "plus") return fmd::Direction::Plus;
  if (s == "minus") return fmd::Direction::Minus;
  throw fmd::ConfigError("unknown direction '" + s + "' (plus|minus)");
}

fmd::SchemeVariant parse_variant(const std::string& s) {
  if (s == "standard") return fmd::SchemeVariant::Standard;
  if (s == "step-ahead") return fmd::SchemeVariant::StepAheadSource;
  throw fmd::ConfigError("unknown scheme variant '" + s +
                         "' (standard|step-ahead)");
}

fmd::SourceSpec parse_source(const RunConfig& c) {
  if (c.source == "wait-first") return fmd::SourceSpec::wait_first();
  if (c.source == "jump-first") return fmd::SourceSpec::jump_first();
  if (c.source == "standard") return fmd::SourceSpec::standard_lw();
  if (c.source == "power-t") return fmd::SourceSpec::power_t(c.mu);
  if (c.source == "zero") return fmd::SourceSpec::zero();
  throw fmd::ConfigError(
      "unknown source '" + c.source +
      "' (wait-first|jump-first|standard|power-t|zero)");
}

fmd::InitialCondition parse_ic(const RunConfig& c) {
  if (c.ic == "zero") return fmd::InitialCondition::zero();
  if (c.ic == "dirac") return fmd::InitialCondition::discrete_dirac(c.ic_at);
  throw fmd::ConfigError("unknown initial condition '" + c.ic +
                         "' (zero|dirac)");
}

// Number of marching steps for horizon T at width h; T must be an integral
// multiple of h so the final level lands exactly on the horizon.
long steps_for(double T, double h) {
  if (!(h > 0.0)) throw fmd::ConfigError("mesh width h must be positive");
  if (!(T > 0.0)) throw fmd::ConfigError("horizon T must be positive");
  const double ratio = T / h;
  const long n = std::llround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) >
                   1e-9 * std::max(1.0, ratio)) {
    throw fmd::ConfigError(
        "horizon T must be a positive integral multiple of h (T/h = " +
        std::to_string(ratio) + ")");
  }
  return n;
}

// Window holding the domain of dependence of every cell the true solution
// can touch. The singular sources live on [0, T] x {the line x = t} in both
// directions, so 2n cells of slack on each side cover any source/direction
// combination; the jump-first tail additionally gets a truncation region out
// to ~4T above the line (the zero fill beyond is an explicit domain
// truncation, not an accuracy statement).
fmd::MeshSpec solve_window(const RunConfig& c, double h, long n) {
  long lo = -(2 * n + 4);
  long hi = 2 * n + 4;
  if (c.source == "jump-first") hi = std::max(hi, 4 * n + 4);
  if (c.ic == "dirac") {
    const long cell = fmd::MeshSpec(h, -1, 1, 1).cell_of(c.ic_at);
    lo = std::min(lo, cell - n - 2);
    hi = std::max(hi, cell + n + 2);
  }
  return fmd::MeshSpec(h, lo, hi, n);
}

int resolved_threads(const RunConfig& c) {
  if (c.threads > 0) return c.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  fmd::write_text_file(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// solve: march one problem and write the final frame (optionally every
// frame) plus a sidecar with the discrete mass history.
// ---------------------------------------------------------------------------

int cmd_solve(const RunConfig& c) {
  const fmd::AlphaParam alpha(c.alphas.at(0));
  const double h = c.hs.at(0);
  const long n = steps_for(c.T, h);
  const fmd::MeshSpec mesh = solve_window(c, h, n);

  const auto history =
      fmd::march(parse_ic(c), parse_source(c), parse_direction(c.direction),
                 alpha, mesh, parse_variant(c.variant));

  const auto dir = fmd::resolve_output_dir(c.out);
  const auto& last = history.frames.back();
  fmd::CsvWriter csv({"i", "x", "u"});
  for (long i = mesh.i_min; i <= mesh.i_max; ++i) {
    csv.add_row({fmd::format_int(i), fmd::format_double(mesh.x(i)),
                 fmd::format_double(last.at(i))});
  }
  csv.write_file(dir / "solve.csv");

  if (c.all_frames) {
    fmd::CsvWriter frames({"n", "t", "i", "x", "u"});
    for (long lvl = 0; lvl < history.levels(); ++lvl) {
      const auto& frame = history.frames[static_cast<size_t>(lvl)];
      for (long i = mesh.i_min; i <= mesh.i_max; ++i) {
        frames.add_row({fmd::format_int(lvl), fmd::format_double(mesh.t(lvl)),
                        fmd::format_int(i), fmd::format_double(mesh.x(i)),
                        fmd::format_double(frame.at(i))});
      }
    }
    frames.write_file(dir / "solve_frames.csv");
  }

  ordered_json j;
  j["config"] = config_to_json(c);
  j["window"] = {{"i_min", mesh.i_min},
                 {"i_max", mesh.i_max},
                 {"n_steps", mesh.n_steps}};
  j["final_time"] = mesh.t(mesh.n_steps);
  j["mass"] = fmd::mass_series(history, mesh.h);
  write_json(dir / "solve.json", j);
  return 0;
}

// ---------------------------------------------------------------------------
// converge: error sweep over mesh widths against the closed-form reference,
// with a power-law rate fit per alpha and per norm.
// ---------------------------------------------------------------------------

// Final-level error restricted to [band_lo, band_hi] (cells whose stencils
// never touched the window edge).
double band_error(const fmd::FieldHistory& history, long band_lo, long band_hi,
                  const std::function<double(long)>& ref, fmd::NormType p) {
  fmd::FieldFrame diff{band_lo,
                       std::vector<double>(static_cast<size_t>(band_hi - band_lo + 1), 0.0)};
  const auto& last = history.frames.back();
  for (long i = band_lo; i <= band_hi; ++i) diff.at(i) = last.at(i) - ref(i);
  return fmd::discrete_norm(diff, p, history.mesh.h);
}

ordered_json fit_to_json(const fmd::RateFit& fit) {
  return ordered_json{{"rate", fit.rate},
                      {"rms_residual", fit.residual},
                      {"coarsest_excluded", fit.coarsest_excluded},
                      {"h_min", fit.h_min},
                      {"h_max", fit.h_max},
                      {"points_used", fit.points_used}};
}

int cmd_converge(const RunConfig& c) {
  if (c.source != "power-t" && c.source != "wait-first") {
    throw fmd::ConfigError(
        "convergence sweeps need a closed-form reference, which exists for "
        "the power-t and wait-first sources only; got '" + c.source + "'");
  }
  if (c.source == "wait-first" && (c.ic != "dirac" || c.ic_at != 0.0)) {
    throw fmd::ConfigError(
        "the wait-first reference is the density of a unit point mass "
        "released at the origin; run the sweep with --ic dirac --ic-at 0");
  }
  const auto direction = parse_direction(c.direction);
  const auto variant = parse_variant(c.variant);
  const int sgn = fmd::direction_sign(direction);

  fmd::CsvWriter csv({"alpha", "h", "err_l2", "err_linf"});
  ordered_json sweeps = ordered_json::array();

  for (double av : c.alphas) {
    const fmd::AlphaParam alpha(av);
    std::vector<std::pair<double, double>> l2_points, linf_points;
    ordered_json rows = ordered_json::array();

    for (double h : c.hs) {
      const long n = steps_for(c.T, h);
      const fmd::MeshSpec mesh = solve_window(c, h, n);
      const auto history = fmd::march(parse_ic(c), parse_source(c), direction,
                                      alpha, mesh, variant);
      const double t_final = mesh.t(n);

      std::function<double(long)> ref;
      long band_lo = mesh.i_min, band_hi = mesh.i_max;
      if (c.source == "power-t") {
        // Exact solution of the pure power-in-time problem is x-independent;
        // measure it away from the window truncation: for Plus the left edge
        // pollutes cells below i_min + n, and the last downwind cell is
        // never computed.
        const double exact = fmd::special_gamma(c.mu + 1.0) /
                             fmd::special_gamma(c.mu + 1.0 + alpha.value) *
                             std::pow(t_final, c.mu + alpha.value);
        ref = [exact](long) { return exact; };
        band_lo = sgn > 0 ? mesh.i_min + n : mesh.i_min + 1;
        band_hi = sgn > 0 ? mesh.i_max - 1 : mesh.i_max - n;
      } else {
        const auto a = alpha;
        const auto m = mesh;
        const double tf = t_final;
        ref = [a, m, tf, sgn](long i) {
          return fmd::pdf_wait_first_cell_average(sgn > 0 ? i : -i, tf, a, m);
        };
      }

      const double e2 = band_error(history, band_lo, band_hi, ref, fmd::NormType::L2);
      const double einf =
          band_error(history, band_lo, band_hi, ref, fmd::NormType::LInf);
      l2_points.emplace_back(h, e2);
      linf_points.emplace_back(h, einf);
      csv.add_row({fmd::format_double(av), fmd::format_double(h),
                   fmd::format_double(e2), fmd::format_double(einf)});
      rows.push_back({{"h", h}, {"err_l2", e2}, {"err_linf", einf}});
    }

    sweeps.push_back({{"alpha", av},
                      {"rows", rows},
                      {"fit_l2", fit_to_json(fmd::fit_rate(l2_points))},
                      {"fit_linf", fit_to_json(fmd::fit_rate(linf_points))}});
  }

  const auto dir = fmd::resolve_output_dir(c.out);
  csv.write_file(dir / "converge.csv");
  ordered_json j;
  j["config"] = config_to_json(c);
  j["sweeps"] = sweeps;
  write_json(dir / "converge.json", j);
  return 0;
}

// ---------------------------------------------------------------------------
// mc / compare: Monte Carlo estimate of the wait-first density, alone or
// against the marching solver and the closed form.
// ---------------------------------------------------------------------------

void require_mc_scope(const RunConfig& c) {
  if (c.source != "wait-first") {
    throw fmd::ConfigError(
        "the Monte Carlo path simulates the wait-first scaling limit only; "
        "sampling the '" + c.source + "' problem is outside its scope");
  }
  if (c.direction != "plus") {
    throw fmd::ConfigError(
        "the Monte Carlo path simulates the one-sided (plus-direction) walk "
        "only; direction '" + c.direction + "' is outside its scope");
  }
  if (c.ic != "zero") {
    throw fmd::ConfigError(
        "the Monte Carlo walkers are always released as a unit point mass "
        "at the origin, so the --ic flag does not apply here; remove it "
        "(the finite-volume half of a comparison runs the matching "
        "point-mass problem automatically)");
  }
}

int cmd_mc(const RunConfig& c) {
  require_mc_scope(c);
  const fmd::AlphaParam alpha(c.alphas.at(0));
  const double h = c.hs.at(0);
  const long n = steps_for(c.T, h);
  const fmd::MeshSpec bins(h, 0, n, 1);

  const auto pdf = fmd::estimate_pdf(alpha, h, c.T, c.n_traj, bins, c.seed,
                                     resolved_threads(c));

  const auto dir = fmd::resolve_output_dir(c.out);
  fmd::CsvWriter csv({"i", "x", "density"});
  double total_mass = 0.0;
  for (long i = bins.i_min; i <= bins.i_max; ++i) {
    total_mass += h * pdf.density(i);
    csv.add_row({fmd::format_int(i), fmd::format_double(bins.x(i)),
                 fmd::format_double(pdf.density(i))});
  }
  csv.write_file(dir / "mc.csv");

  ordered_json j;
  j["config"] = config_to_json(c);
  j["n_trajectories"] = pdf.n_trajectories;
  j["overflow_count"] = pdf.overflow_count;
  j["overflow_mass"] = pdf.overflow_mass();
  j["total_mass"] = total_mass;
  write_json(dir / "mc.json", j);
  return 0;
}

int cmd_compare(const RunConfig& c) {
  require_mc_scope(c);
  const fmd::AlphaParam alpha(c.alphas.at(0));
  const double h = c.hs.at(0);
  const long n = steps_for(c.T, h);
  const auto variant = parse_variant(c.variant);
  const fmd::MeshSpec mesh = solve_window(c, h, n);
  const fmd::MeshSpec bins(h, 0, n, 1);
  const int threads = resolved_threads(c);

  // The artifacts: one marched field and two Monte Carlo budgets (the
  // smaller one demonstrates the statistical improvement with n_traj).
  // Both routes solve the same problem: the density of a unit point mass
  // released at the origin, driven by the singular wait-first source.
  const auto history = fmd::march(fmd::InitialCondition::discrete_dirac(0.0),
                                  fmd::SourceSpec::wait_first(),
                                  fmd::Direction::Plus, alpha, mesh, variant);
  const std::uint64_t n_small = std::max<std::uint64_t>(1, c.n_traj / 10);
  const auto mc_small =
      fmd::estimate_pdf(alpha, h, c.T, n_small, bins, c.seed, threads);
  const auto mc_full =
      fmd::estimate_pdf(alpha, h, c.T, c.n_traj, bins, c.seed, threads);

  const auto& last = history.frames.back();
  auto exact = [&](long i) {
    return fmd::pdf_wait_first_cell_average(i, c.T, alpha, mesh);
  };
  double l1_fv = 0.0, l1_small = 0.0, l1_full = 0.0;
  fmd::CsvWriter csv({"i", "x", "u_fv", "u_mc", "u_exact"});
  for (long i = bins.i_min; i <= bins.i_max; ++i) {
    const double ex = exact(i);
    l1_fv += h * std::abs(last.at(i) - ex);
    l1_small += h * std::abs(mc_small.density(i) - ex);
    l1_full += h * std::abs(mc_full.density(i) - ex);
    csv.add_row({fmd::format_int(i), fmd::format_double(bins.x(i)),
                 fmd::format_double(last.at(i)),
                 fmd::format_double(mc_full.density(i)),
                 fmd::format_double(ex)});
  }

  // Wall-clock comparison of the two routes to the same density (median of
  // c.reps runs each, on the thread budget the run was configured with).
  const auto timing = fmd::timing_compare(
      [&] {
        fmd::march(fmd::InitialCondition::discrete_dirac(0.0),
                   fmd::SourceSpec::wait_first(), fmd::Direction::Plus, alpha,
                   mesh, variant);
      },
      [&] {
        fmd::estimate_pdf(alpha, h, c.T, c.n_traj, bins, c.seed, threads);
      },
      c.reps);

  const auto dir = fmd::resolve_output_dir(c.out);
  csv.write_file(dir / "compare.csv");

  ordered_json j;
  j["config"] = config_to_json(c);
  j["problem"] =
      "wait-first density: unit point mass released at the origin plus the "
      "singular source";
  j["timing"] = {{"fv_seconds", timing.fv_seconds},
                 {"mc_seconds", timing.mc_seconds},
                 {"mc_over_fv", timing.ratio},
                 {"reps", c.reps},
                 {"threads", threads}};
  j["l1_error"] = {{"fv", l1_fv},
                   {"mc", {{"n_traj", ordered_json::array({n_small, c.n_traj})},
                           {"err", ordered_json::array({l1_small, l1_full})}}}};
  j["mc_improves_with_budget"] = l1_full < l1_small;
  write_json(dir / "compare.json", j);
  return 0;
}

// ---------------------------------------------------------------------------
// Argument wiring.
// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  RunConfig c;

  CLI::App app{
      "Finite-volume marching, closed-form densities, and Monte Carlo "
      "cross-checks for one-sided fractional transport problems"};
  app.require_subcommand(1);
  // --h is a domain flag (mesh width), so help lives on --help alone.
  app.set_help_flag("--help", "print this help message and exit");

  auto add_common = [&](CLI::App* cmd, bool sweep) {
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--alpha", c.alphas,
                    sweep ? "fractional order(s) in (0,1)"
                          : "fractional order in (0,1)")
        ->expected(sweep ? -1 : 1);
    cmd->add_option("--h", c.hs,
                    sweep ? "mesh width(s); give several for the sweep"
                          : "mesh width")
        ->expected(sweep ? -1 : 1);
    cmd->add_option("--T", c.T, "time horizon (integral multiple of h)");
    cmd->add_option("--direction", c.direction, "plus | minus");
    cmd->add_option("--source", c.source,
                    "wait-first | jump-first | standard | power-t | zero");
    cmd->add_option("--mu", c.mu, "power-t exponent");
    cmd->add_option("--ic", c.ic, "zero | dirac");
    cmd->add_option("--ic-at", c.ic_at, "location of the dirac point mass");
    cmd->add_option("--variant", c.variant, "standard | step-ahead");
    cmd->add_option("--out", c.out,
                    "output directory (default: $FMD_OUT_DIR or .)");
  };

  auto* solve = app.add_subcommand("solve", "march one problem and write the field");
  add_common(solve, false);
  solve->add_flag("--all-frames", c.all_frames, "also write every time level");

  auto* converge =
      app.add_subcommand("converge", "error sweep over mesh widths with rate fits");
  add_common(converge, true);

  auto* mc = app.add_subcommand("mc", "Monte Carlo wait-first density estimate");
  add_common(mc, false);
  mc->add_option("--n-traj", c.n_traj, "number of trajectories");
  mc->add_option("--seed", c.seed, "RNG seed");
  mc->add_option("--threads", c.threads,
                 "worker threads (0 = hardware concurrency)");

  auto* compare = app.add_subcommand(
      "compare", "marching vs Monte Carlo vs closed form, with timings");
  add_common(compare, false);
  compare->add_option("--n-traj", c.n_traj, "number of trajectories");
  compare->add_option("--seed", c.seed, "RNG seed");
  compare->add_option("--threads", c.threads,
                      "worker threads (0 = hardware concurrency)");
  compare->add_option("--reps", c.reps, "timing repetitions (median is kept)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // parse problems are configuration errors
  }

  c.command = app.get_subcommands().front()->get_name();
  if (c.alphas.empty()) c.alphas = {0.5};
  if (c.hs.empty()) {
    if (c.command == "converge") {
      c.hs = {std::ldexp(1.0, -4), std::ldexp(1.0, -5), std::ldexp(1.0, -6),
              std::ldexp(1.0, -7), std::ldexp(1.0, -8), std::ldexp(1.0, -9)};
    } else {
      c.hs = {std::ldexp(1.0, -10)};
    }
  }

  if (c.command == "converge") {
    if (c.hs.size() < 3) {
      throw fmd::ConfigError(
          "the convergence rate fit needs at least 3 mesh widths");
    }
  } else {
    if (c.alphas.size() != 1) {
      throw fmd::ConfigError("exactly one --alpha is expected here");
    }
    if (c.hs.size() != 1) {
      throw fmd::ConfigError("exactly one --h is expected here");
    }
  }
  for (double av : c.alphas) (void)fmd::AlphaParam{av};  // validates (0,1)
  if (c.n_traj == 0) throw fmd::ConfigError("need at least one trajectory");
  if (c.threads < 0) throw fmd::ConfigError("thread count cannot be negative");
  if (c.reps < 1) throw fmd::ConfigError("need at least one timing repetition");
  parse_direction(c.direction);
  parse_variant(c.variant);
  parse_source(c);
  parse_ic(c);

  // The config must survive a serialization round trip before anything runs.
  const RunConfig echoed = config_from_json(config_to_json(c));
  if (config_to_json(echoed) != config_to_json(c)) {
    throw fmd::ConfigError("run configuration does not round-trip");
  }

  if (c.command == "solve") return cmd_solve(c);
  if (c.command == "converge") return cmd_converge(c);
  if (c.command == "mc") return cmd_mc(c);
  return cmd_compare(c);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fmd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fmd::DomainOfDependenceError& e) {
    std::cerr << "accuracy error: " << e.what() << "\n";
    return 3;
  } catch (const fmd::AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << "\n";
    return 3;
  } catch (const fmd::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
