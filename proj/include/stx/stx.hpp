#pragma once

#include "stx/analyze.hpp"
#include "stx/bootstrap.hpp"
#include "stx/brown_resnick.hpp"
#include "stx/clusters.hpp"
#include "stx/detrend.hpp"
#include "stx/field_series.hpp"
#include "stx/gaussian_field.hpp"
#include "stx/grid.hpp"
#include "stx/io.hpp"
#include "stx/ordinal.hpp"
#include "stx/parallel.hpp"
#include "stx/quantile.hpp"
#include "stx/report.hpp"
#include "stx/risk.hpp"
#include "stx/rng.hpp"
#include "stx/spline.hpp"
#include "stx/tail_oracle.hpp"
#include "stx/threshold.hpp"
#include "stx/types.hpp"
#include "stx/variogram.hpp"
