#pragma once

#include "pmaplab/error.hpp"
#include "pmaplab/rng.hpp"
#include "pmaplab/core_model.hpp"
#include "pmaplab/structures.hpp"
#include "pmaplab/basins.hpp"
#include "pmaplab/step_function.hpp"
#include "pmaplab/walks.hpp"
#include "pmaplab/joyal.hpp"
#include "pmaplab/limit_process.hpp"
#include "pmaplab/icrt.hpp"
#include "pmaplab/stats.hpp"
#include "pmaplab/io.hpp"
#include "pmaplab/harness.hpp"
#include "pmaplab/experiments.hpp"
#include "pmaplab/checks.hpp"
