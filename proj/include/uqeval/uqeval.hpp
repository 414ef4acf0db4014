#pragma once

#include "uqeval/calibration.hpp"
#include "uqeval/class_catalog.hpp"
#include "uqeval/classification.hpp"
#include "uqeval/csv.hpp"
#include "uqeval/ensemble.hpp"
#include "uqeval/errors.hpp"
#include "uqeval/heatmap.hpp"
#include "uqeval/losses.hpp"
#include "uqeval/manifest.hpp"
#include "uqeval/matrix.hpp"
#include "uqeval/prediction_store.hpp"
#include "uqeval/report.hpp"
#include "uqeval/rng.hpp"
#include "uqeval/split.hpp"
#include "uqeval/synthgen.hpp"
