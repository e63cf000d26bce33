#pragma once

// Umbrella header: frequency-domain analysis of log-periodic power-law
// price trajectories with mean-reverting noise.

#include "lpplspec/denoise.hpp"
#include "lpplspec/errors.hpp"
#include "lpplspec/estimators.hpp"
#include "lpplspec/experiments.hpp"
#include "lpplspec/fft.hpp"
#include "lpplspec/format.hpp"
#include "lpplspec/lppl.hpp"
#include "lpplspec/ou.hpp"
#include "lpplspec/rng.hpp"
#include "lpplspec/spectra.hpp"
#include "lpplspec/timeseries.hpp"
