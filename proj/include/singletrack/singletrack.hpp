#pragma once

#include "singletrack/config.hpp"
#include "singletrack/control.hpp"
#include "singletrack/dynamics.hpp"
#include "singletrack/metrics.hpp"
#include "singletrack/scenario.hpp"
#include "singletrack/simulate.hpp"
#include "singletrack/trace_io.hpp"
#include "singletrack/tuner.hpp"
#include "singletrack/vehicle.hpp"
