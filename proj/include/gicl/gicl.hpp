#pragma once

#include "gicl/fit.hpp"
#include "gicl/graph.hpp"
#include "gicl/init.hpp"
#include "gicl/math.hpp"
#include "gicl/merge.hpp"
#include "gicl/metrics.hpp"
#include "gicl/partition.hpp"
#include "gicl/render.hpp"
#include "gicl/rng.hpp"
#include "gicl/stats.hpp"
#include "gicl/synth.hpp"
