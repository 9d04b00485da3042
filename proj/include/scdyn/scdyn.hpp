#ifndef SCDYN_SCDYN_HPP
#define SCDYN_SCDYN_HPP

// Umbrella header: convergence thresholds of single and spatially coupled
// discrete dynamical systems via density evolution, potential / Lyapunov
// functions, and fixed-point spectral analysis.

#include "scdyn/continuum.hpp"
#include "scdyn/dynamics.hpp"
#include "scdyn/errors.hpp"
#include "scdyn/interpolate.hpp"
#include "scdyn/io.hpp"
#include "scdyn/lyapunov_potential.hpp"
#include "scdyn/quadrature.hpp"
#include "scdyn/search.hpp"
#include "scdyn/spectral.hpp"
#include "scdyn/system_model.hpp"
#include "scdyn/threshold.hpp"
#include "scdyn/version.hpp"

#endif  // SCDYN_SCDYN_HPP
