#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fmd/core.hpp"
#include "fmd/mesh.hpp"
#include "fmd/source.hpp"
#include "fmd/special.hpp"

using fmd::AlphaParam;
using fmd::ConfigError;
using fmd::MeshSpec;
using fmd::SourceCache;
using fmd::SourceKind;
using fmd::SourceSpec;
using fmd::source_cell_average;
using fmd::source_support_cells;
using fmd::special_gamma;

TEST_CASE("source factories validate their inputs", "[source]") {
  CHECK_THROWS_AS(SourceSpec::power_t(0.0), ConfigError);
  CHECK_THROWS_AS(SourceSpec::power_t(-1.0), ConfigError);
  CHECK_THROWS_AS(SourceSpec::sampled(nullptr, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(
      SourceSpec::sampled([](double, double) { return 1.0; }, 1.0, 0.0),
      ConfigError);

  CHECK(SourceSpec::wait_first().singular_in_time());
  CHECK(SourceSpec::jump_first().singular_in_time());
  CHECK(SourceSpec::standard_lw().singular_in_time());
  CHECK_FALSE(SourceSpec::power_t(2.0).singular_in_time());
  CHECK(SourceSpec::zero().identically_zero);
  CHECK_FALSE(SourceSpec::zero().singular_in_time());
}

TEST_CASE("singular kinds reject time level zero", "[source]") {
  const MeshSpec mesh(0.25, -4, 4, 4);
  const AlphaParam a(0.5);
  for (auto spec : {SourceSpec::wait_first(), SourceSpec::jump_first(),
                    SourceSpec::standard_lw()}) {
    CHECK_THROWS_AS(source_cell_average(spec, 0, 0, mesh, a), ConfigError);
  }
  // The power source is finite at t = 0.
  CHECK(source_cell_average(SourceSpec::power_t(2.0), 0, 0, mesh, a) == 0.0);
  CHECK_THROWS_AS(
      source_cell_average(SourceSpec::power_t(1.0), 0, -1, mesh, a),
      ConfigError);
}

TEST_CASE("power source cell averages", "[source]") {
  const MeshSpec mesh(0.25, -4, 4, 4);
  const AlphaParam a(0.5);
  const auto spec = SourceSpec::power_t(2.0);
  // Constant in x: identical in every cell, equal to t^mu.
  for (long i : {-4L, 0L, 3L}) {
    CHECK(source_cell_average(spec, i, 2, mesh, a) == 0.25);
  }
  CHECK_THAT(source_cell_average(SourceSpec::power_t(1.5), 0, 3, mesh, a),
             Catch::Matchers::WithinRel(std::pow(0.75, 1.5), 1e-15));
}

TEST_CASE("wait-first source is a point mass at the origin", "[source]") {
  // Cell 0, n = 2, a = 0.5, h = 0.25: (0.5)^{-1/2} / (G(0.5) * 0.25).
  const MeshSpec mesh(0.25, -4, 4, 4);
  const AlphaParam a(0.5);
  const auto spec = SourceSpec::wait_first();
  CHECK_THAT(source_cell_average(spec, 0, 2, mesh, a),
             Catch::Matchers::WithinRel(3.1915382432114614235, 1e-13));
  for (long i : {-2L, -1L, 1L, 2L}) {
    CHECK(source_cell_average(spec, i, 2, mesh, a) == 0.0);
  }
  // Discrete mass of the row equals the strength t^{-a}/G(1-a) exactly.
  const double strength = std::pow(0.5, -0.5) / special_gamma(0.5);
  CHECK_THAT(mesh.h * source_cell_average(spec, 0, 2, mesh, a),
             Catch::Matchers::WithinRel(strength, 1e-15));
}

TEST_CASE("standard-walk source rides the characteristic", "[source]") {
  const MeshSpec mesh(0.25, -4, 8, 6);
  const AlphaParam a(0.75);
  const auto spec = SourceSpec::standard_lw();
  for (long n : {1L, 3L, 5L}) {
    const long on = mesh.cell_of(mesh.t(n));
    const double t = mesh.t(n);
    CHECK_THAT(source_cell_average(spec, on, n, mesh, a),
               Catch::Matchers::WithinRel(
                   std::pow(t, -0.75) / (special_gamma(0.25) * mesh.h),
                   1e-14));
    CHECK(source_cell_average(spec, on - 1, n, mesh, a) == 0.0);
    CHECK(source_cell_average(spec, on + 1, n, mesh, a) == 0.0);
  }
}

TEST_CASE("jump-first source telescopes to the exact tail mass", "[source]") {
  // h * sum of cell averages over cells covering (t, X] must equal
  // (t^{-a} - X^{-a}) / G(1-a) by the telescoping antiderivative.
  const MeshSpec mesh(0.125, 0, 64, 8);
  for (double av : {0.25, 0.5, 0.75}) {
    const AlphaParam a(av);
    const auto spec = SourceSpec::jump_first();
    const long n = 3;
    const double t = mesh.t(n);
    double mass = 0.0;
    for (long i = mesh.cell_of(t); i <= mesh.i_max; ++i) {
      mass += mesh.h * source_cell_average(spec, i, n, mesh, a);
    }
    const double hi = mesh.x(mesh.i_max) + 0.5 * mesh.h;
    const double exact =
        (std::pow(t, -av) - std::pow(hi, -av)) / special_gamma(1.0 - av);
    REQUIRE_THAT(mass, Catch::Matchers::WithinRel(exact, 1e-12));

    // Cells entirely below t carry nothing.
    CHECK(source_cell_average(spec, mesh.cell_of(t) - 1, n, mesh, a) == 0.0);
  }
}

TEST_CASE("sampled source uses an exact cubic cell rule", "[source]") {
  const MeshSpec mesh(0.25, -4, 4, 4);
  const AlphaParam a(0.5);
  const auto spec = SourceSpec::sampled(
      [](double x, double t) { return x * x * (1.0 + t) + x * x * x; }, -2.0,
      2.0);
  // Exact average of x^2(1+t) + x^3 over cell i: (c^2 + h^2/12)(1+t)
  // + c^3 + c h^2 / 4.
  for (long i : {-3L, 0L, 2L}) {
    const double c = mesh.x(i), h = mesh.h, t = mesh.t(1);
    const double exact =
        (c * c + h * h / 12.0) * (1.0 + t) + c * c * c + 0.25 * c * h * h;
    REQUIRE_THAT(source_cell_average(spec, i, 1, mesh, a),
                 Catch::Matchers::WithinAbs(exact, 1e-15));
  }
  // Zero source: every average is exactly zero.
  CHECK(source_cell_average(SourceSpec::zero(), 0, 1, mesh, a) == 0.0);
}

TEST_CASE("source support cells per kind", "[source]") {
  const MeshSpec mesh(0.25, -8, 8, 4);

  const auto pt = source_support_cells(SourceSpec::power_t(1.0), mesh, 1, 4);
  CHECK(pt.lo_unbounded);
  CHECK(pt.hi_unbounded);

  const auto wf = source_support_cells(SourceSpec::wait_first(), mesh, 1, 4);
  CHECK(wf.lo == 0);
  CHECK(wf.hi == 0);
  CHECK_FALSE(wf.lo_unbounded);
  CHECK_FALSE(wf.hi_unbounded);

  const auto st = source_support_cells(SourceSpec::standard_lw(), mesh, 1, 4);
  CHECK(st.lo == mesh.cell_of(mesh.t(1)));
  CHECK(st.hi == mesh.cell_of(mesh.t(4)));

  const auto jf = source_support_cells(SourceSpec::jump_first(), mesh, 2, 4);
  CHECK(jf.lo == mesh.cell_of(mesh.t(2)));
  CHECK(jf.hi_unbounded);
  CHECK_FALSE(jf.lo_unbounded);

  const auto sm = source_support_cells(
      SourceSpec::sampled([](double, double) { return 1.0; }, -0.6, 0.9), mesh,
      1, 4);
  CHECK(sm.lo == mesh.cell_of(-0.6) - 1);
  CHECK(sm.hi == mesh.cell_of(0.9) + 1);

  CHECK(source_support_cells(SourceSpec::zero(), mesh, 1, 4).empty());
}

TEST_CASE("source cache rows reproduce the direct averages", "[source]") {
  const MeshSpec mesh(0.25, -4, 6, 4);
  const AlphaParam a(0.5);
  const auto spec = SourceSpec::jump_first();
  SourceCache cache(spec, mesh, a);

  const auto& row = cache.row(2);
  REQUIRE(row.size() == static_cast<size_t>(mesh.cells()));
  for (long i = mesh.i_min; i <= mesh.i_max; ++i) {
    REQUIRE(row[static_cast<size_t>(i - mesh.i_min)] ==
            source_cell_average(spec, i, 2, mesh, a));
  }
  // Cached: the second lookup returns the identical vector.
  CHECK(&cache.row(2) == &row);
  CHECK(cache.source().kind == SourceKind::JumpFirst);
}
