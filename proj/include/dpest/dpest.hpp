#pragma once

#include "dpest/audit.hpp"
#include "dpest/core.hpp"
#include "dpest/io.hpp"
#include "dpest/mean.hpp"
#include "dpest/mechanisms.hpp"
#include "dpest/peeling.hpp"
#include "dpest/regression.hpp"
#include "dpest/sim.hpp"
#include "dpest/tuning.hpp"
