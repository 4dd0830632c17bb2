#pragma once

#include "tbn/compiler/encoder.hpp"
#include "tbn/learn/config.hpp"
#include "tbn/learn/trace.hpp"
#include "tbn/model/dataset.hpp"
#include "tbn/model/network.hpp"

namespace tbn::learn {

struct LearnResult {
  BayesianNetwork network;  // refit at `alpha`
  compiler::CompiledModel model;
  LearnTrace trace;
  double alpha = 1.0;
  // Validation log-likelihood of the selected snapshot (search alpha) and
  // of the refit network.
  double snapshot_valid_ll = 0.0;
  double valid_ll = 0.0;
};

// Restarted ordering-based search. Each restart starts from a random
// ordering (seeded from rng_seed and the restart index), alternates tree
// growth and swaps, and snapshots the network after every growth phase and
// at its end. The snapshot with the best validation likelihood wins and is
// refit with the best alpha of the grid. Throws InputError on empty training
// data and SchemaError when the datasets disagree on columns.
LearnResult learn(const Dataset& train, const Dataset& valid, const LearnConfig& config);

}  // namespace tbn::learn
