#pragma once

#include "analysis.hpp"
#include "checks.hpp"
#include "core.hpp"
#include "data.hpp"
#include "eta.hpp"
#include "harness.hpp"
#include "metrics.hpp"
#include "resample.hpp"
#include "synth.hpp"
#include "usq.hpp"
