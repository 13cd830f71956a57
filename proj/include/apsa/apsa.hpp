#pragma once

#include "apsa/config.hpp"
#include "apsa/core.hpp"
#include "apsa/csv.hpp"
#include "apsa/experiment.hpp"
#include "apsa/presets.hpp"
#include "apsa/rng.hpp"
#include "apsa/signal.hpp"
#include "apsa/stepsize.hpp"
#include "apsa/window.hpp"
