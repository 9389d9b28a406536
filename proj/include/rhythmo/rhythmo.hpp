#pragma once

#include "rhythmo/adaboost.hpp"
#include "rhythmo/bfgs.hpp"
#include "rhythmo/easy_ensemble.hpp"
#include "rhythmo/error.hpp"
#include "rhythmo/evaluate.hpp"
#include "rhythmo/gbm.hpp"
#include "rhythmo/ingest.hpp"
#include "rhythmo/logistic.hpp"
#include "rhythmo/model.hpp"
#include "rhythmo/pipeline.hpp"
#include "rhythmo/preprocess.hpp"
#include "rhythmo/rng.hpp"
#include "rhythmo/synth.hpp"
#include "rhythmo/tree.hpp"
#include "rhythmo/types.hpp"
