#pragma once

#include "fsa/baselines.hpp"
#include "fsa/bcd.hpp"
#include "fsa/channel.hpp"
#include "fsa/constants.hpp"
#include "fsa/decomposition.hpp"
#include "fsa/errors.hpp"
#include "fsa/experiment.hpp"
#include "fsa/frequency_plan.hpp"
#include "fsa/geometry.hpp"
#include "fsa/metrics.hpp"
#include "fsa/null_steering.hpp"
#include "fsa/pga.hpp"
#include "fsa/rng.hpp"
#include "fsa/terminal.hpp"
