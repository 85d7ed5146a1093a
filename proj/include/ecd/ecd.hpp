#pragma once

// Umbrella header.

#include "ecd/binning.hpp"
#include "ecd/csv.hpp"
#include "ecd/error.hpp"
#include "ecd/gaussian.hpp"
#include "ecd/metrics.hpp"
#include "ecd/report.hpp"
#include "ecd/rng.hpp"
#include "ecd/simulation.hpp"
#include "ecd/summation.hpp"
#include "ecd/svg.hpp"
