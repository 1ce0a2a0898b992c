#pragma once

// Umbrella header for the fractional-material-derivative toolkit:
// the discrete marching operator and solver, closed-form densities,
// Monte Carlo cross-checks, and reporting helpers.

#include "fmd/core.hpp"
#include "fmd/special.hpp"
#include "fmd/quadrature.hpp"
#include "fmd/mesh.hpp"
#include "fmd/l1.hpp"
#include "fmd/matder.hpp"
#include "fmd/source.hpp"
#include "fmd/solver.hpp"
#include "fmd/analytic.hpp"
#include "fmd/rng.hpp"
#include "fmd/stable.hpp"
#include "fmd/empirical.hpp"
#include "fmd/metrics.hpp"
#include "fmd/report.hpp"
