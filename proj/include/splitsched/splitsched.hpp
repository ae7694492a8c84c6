#pragma once

// Umbrella header: the whole library in one include.

#include "splitsched/convergence.hpp"
#include "splitsched/errors.hpp"
#include "splitsched/experiments.hpp"
#include "splitsched/fidelity.hpp"
#include "splitsched/ga.hpp"
#include "splitsched/io.hpp"
#include "splitsched/rng.hpp"
#include "splitsched/scheduler.hpp"
#include "splitsched/types.hpp"
