#pragma once

// Umbrella header for the whole library.

#include "sel/core/csv.hpp"
#include "sel/core/dataset.hpp"
#include "sel/core/error.hpp"
#include "sel/core/rng.hpp"
#include "sel/core/split.hpp"
#include "sel/core/standardize.hpp"
#include "sel/extract/color_histogram.hpp"
#include "sel/extract/ewma.hpp"
#include "sel/extract/moments.hpp"
#include "sel/extract/quantiles.hpp"
#include "sel/extract/tfidf.hpp"
#include "sel/estimate/calendar.hpp"
#include "sel/estimate/cauchy_mle.hpp"
#include "sel/estimate/linear.hpp"
#include "sel/estimate/strength.hpp"
#include "sel/learn/forest.hpp"
#include "sel/learn/gbt.hpp"
#include "sel/learn/lasso.hpp"
#include "sel/learn/predict.hpp"
#include "sel/learn/serialize.hpp"
#include "sel/learn/tree.hpp"
#include "sel/explain/importance.hpp"
#include "sel/explain/partial_dependence.hpp"
#include "sel/simbench/benchmark.hpp"
#include "sel/simbench/instance.hpp"
#include "sel/cli/pnm.hpp"
