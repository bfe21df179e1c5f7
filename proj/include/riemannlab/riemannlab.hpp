#pragma once

// Single include pulling in the whole library: oscillator potentials built
// from zeta-zero data, semiclassical and grid eigensolvers, first-order
// perturbation machinery, counting/fit analysis, and table emission.

#include "riemannlab/analysis.hpp"
#include "riemannlab/grid_solver.hpp"
#include "riemannlab/perturbation.hpp"
#include "riemannlab/potential.hpp"
#include "riemannlab/quadrature.hpp"
#include "riemannlab/report.hpp"
#include "riemannlab/special_functions.hpp"
#include "riemannlab/wkb.hpp"
#include "riemannlab/zeros.hpp"
