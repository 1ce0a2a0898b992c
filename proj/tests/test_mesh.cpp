#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "fmd/core.hpp"
#include "fmd/mesh.hpp"

using fmd::ConfigError;
using fmd::DomainOfDependenceError;
using fmd::FieldFrame;
using fmd::FieldHistory;
using fmd::MeshSpec;
using fmd::zero_frame;

TEST_CASE("mesh constructor validation", "[mesh]") {
  CHECK_THROWS_AS(MeshSpec(0.0, 0, 4, 1), ConfigError);
  CHECK_THROWS_AS(MeshSpec(-0.5, 0, 4, 1), ConfigError);
  CHECK_THROWS_AS(
      MeshSpec(std::numeric_limits<double>::quiet_NaN(), 0, 4, 1),
      ConfigError);
  CHECK_THROWS_AS(
      MeshSpec(std::numeric_limits<double>::infinity(), 0, 4, 1),
      ConfigError);
  CHECK_THROWS_AS(MeshSpec(0.5, 3, 2, 1), ConfigError);
  CHECK_THROWS_AS(MeshSpec(0.5, 0, 4, 0), ConfigError);
}

TEST_CASE("mesh geometry accessors", "[mesh]") {
  MeshSpec mesh(0.25, -4, 7, 8);
  CHECK(mesh.x(-4) == -1.0);
  CHECK(mesh.x(0) == 0.0);
  CHECK(mesh.x(7) == 1.75);
  CHECK(mesh.t(8) == 2.0);
  CHECK(mesh.horizon() == 2.0);
  CHECK(mesh.cells() == 12);
  CHECK(mesh.contains(-4));
  CHECK(mesh.contains(7));
  CHECK_FALSE(mesh.contains(-5));
  CHECK_FALSE(mesh.contains(8));
}

TEST_CASE("cells are half-open with the upper edge included", "[mesh]") {
  MeshSpec mesh(0.25, -8, 8, 4);
  const double h = mesh.h;

  CHECK(mesh.cell_of(0.0) == 0);
  // Upper edge belongs to the cell below it: h/2 is the top of cell 0.
  CHECK(mesh.cell_of(0.5 * h) == 0);
  CHECK(mesh.cell_of(std::nextafter(0.5 * h, 1.0)) == 1);
  CHECK(mesh.cell_of(-0.5 * h) == -1);
  // A half-ulp above the lower edge ties back to the edge under
  // round-to-even in x/h - 0.5, so probe a representably interior point.
  CHECK(mesh.cell_of(-0.49 * h) == 0);
  CHECK(mesh.cell_of(0.75 * h) == 1);
  CHECK(mesh.cell_of(3.0 * h) == 3);
  CHECK(mesh.cell_of(-2.6 * h) == -3);

  // Every cell center maps to its own cell.
  for (long i = mesh.i_min; i <= mesh.i_max; ++i) {
    REQUIRE(mesh.cell_of(mesh.x(i)) == i);
  }
}

TEST_CASE("field frame bound checking", "[mesh]") {
  MeshSpec mesh(0.5, -2, 3, 2);
  FieldFrame f = zero_frame(mesh);
  CHECK(f.i_min == -2);
  CHECK(f.i_max() == 3);
  CHECK(f.values.size() == 6);

  f.at(-2) = 1.5;
  f.at(3) = -0.5;
  CHECK(f.at(-2) == 1.5);
  CHECK(f.at(3) == -0.5);
  CHECK(f.at(0) == 0.0);

  CHECK_THROWS_AS(f.at(-3), DomainOfDependenceError);
  CHECK_THROWS_AS(f.at(4), DomainOfDependenceError);
  const FieldFrame& cf = f;
  CHECK_THROWS_AS(cf.at(17), DomainOfDependenceError);
}

TEST_CASE("field history level checking", "[mesh]") {
  MeshSpec mesh(0.5, -2, 3, 2);
  FieldHistory hist{mesh, {}};
  hist.frames.push_back(zero_frame(mesh));
  hist.frames.push_back(zero_frame(mesh));
  CHECK(hist.levels() == 2);
  CHECK(hist.frame(0).i_min == -2);
  CHECK(hist.frame(1).i_max() == 3);
  CHECK_THROWS_AS(hist.frame(2), ConfigError);
  CHECK_THROWS_AS(hist.frame(-1), ConfigError);
}
