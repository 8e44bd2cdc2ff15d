#pragma once

// Wind-farm power modeling toolkit: SCADA feature pipeline, parametric and
// machine-learning regressors, the farm benchmark protocol, and a synthetic
// data generator.

#include "windml/common/rng.hpp"
#include "windml/common/stats.hpp"
#include "windml/ensemble/forest.hpp"
#include "windml/ensemble/prune.hpp"
#include "windml/ensemble/tree.hpp"
#include "windml/eval/baselines.hpp"
#include "windml/eval/farm.hpp"
#include "windml/eval/metrics.hpp"
#include "windml/eval/split.hpp"
#include "windml/io/hash.hpp"
#include "windml/io/model_json.hpp"
#include "windml/io/report_csv.hpp"
#include "windml/neighbors/knn.hpp"
#include "windml/neighbors/svr.hpp"
#include "windml/parametric/lasso.hpp"
#include "windml/parametric/linear.hpp"
#include "windml/parametric/sigmoid.hpp"
#include "windml/pipeline/aggregate.hpp"
#include "windml/pipeline/circular.hpp"
#include "windml/pipeline/record.hpp"
#include "windml/pipeline/scada_csv.hpp"
#include "windml/pipeline/standardize.hpp"
#include "windml/pipeline/virtual_sensor.hpp"
#include "windml/synth/power.hpp"
#include "windml/synth/simulate.hpp"
