#pragma once

// Umbrella header: pulls in the full library surface.

#include "bubblescope/adf.hpp"
#include "bubblescope/calibrate.hpp"
#include "bubblescope/common.hpp"
#include "bubblescope/config.hpp"
#include "bubblescope/csv.hpp"
#include "bubblescope/engle_granger.hpp"
#include "bubblescope/filter.hpp"
#include "bubblescope/lppls.hpp"
#include "bubblescope/mackinnon.hpp"
#include "bubblescope/month.hpp"
#include "bubblescope/ols.hpp"
#include "bubblescope/pipeline.hpp"
#include "bubblescope/report.hpp"
#include "bubblescope/rng.hpp"
#include "bubblescope/series.hpp"
#include "bubblescope/simulate.hpp"
