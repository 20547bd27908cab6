#pragma once

// Umbrella header: local variable importance via quantile-grid (CLIQUE) and
// permutation (CLIP) replacements against per-observation cross-validation
// errors, with the built-in CART/random-forest models and the simulation
// experiment harness.

#include "clique/csv.hpp"
#include "clique/cv.hpp"
#include "clique/dataset.hpp"
#include "clique/errors.hpp"
#include "clique/experiments.hpp"
#include "clique/forest.hpp"
#include "clique/importance.hpp"
#include "clique/kv.hpp"
#include "clique/loss.hpp"
#include "clique/model_io.hpp"
#include "clique/parallel.hpp"
#include "clique/pipeline.hpp"
#include "clique/quantile.hpp"
#include "clique/region.hpp"
#include "clique/rng.hpp"
#include "clique/simulate.hpp"
#include "clique/summarize.hpp"
#include "clique/svg_plot.hpp"
