#pragma once

// Umbrella header for the tfpm library: a spectral solver for
// time-fractional porous-medium-type equations D_t^alpha u = -L u^m with
// zero Dirichlet conditions on an interval, plus the machinery to certify
// the scheme's comparison, contractivity, smoothing and decay properties.

#include "tfpm/analysis.hpp"
#include "tfpm/caputo.hpp"
#include "tfpm/config.hpp"
#include "tfpm/csv.hpp"
#include "tfpm/errors.hpp"
#include "tfpm/fode.hpp"
#include "tfpm/profile.hpp"
#include "tfpm/runner.hpp"
#include "tfpm/special_functions.hpp"
#include "tfpm/spectral.hpp"
#include "tfpm/stepper.hpp"
#include "tfpm/verify.hpp"
