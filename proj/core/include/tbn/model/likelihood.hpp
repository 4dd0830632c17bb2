#pragma once

#include <cstdint>

#include "tbn/model/bitvector.hpp"
#include "tbn/model/dataset.hpp"
#include "tbn/model/network.hpp"
#include "tbn/model/types.hpp"

namespace tbn {

// Dirichlet posterior mean (count_true + alpha) / (n + 2 alpha).
// Throws ConfigError unless alpha > 0.
double estimate_leaf_prob(std::uint64_t count_true, std::uint64_t count_false, double alpha);

// count_true * log p + count_false * log(1 - p), with 0 * log(.) = 0.
double leaf_log_likelihood(SufficientStats counts, double prob_true);

// Sum over rows and variables of log P(x_v | context). Throws SchemaError when
// the dataset columns do not match the network's variables.
double log_likelihood(const BayesianNetwork& bn, const Dataset& data);

// Change in training log-likelihood when the leaf holding `parent` is split
// into the two branches, each re-estimated with the same alpha. Throws
// ConsistencyError when the branches do not partition the parent.
double split_gain(SufficientStats parent, SufficientStats true_branch,
                  SufficientStats false_branch, double alpha);

// Rows of `data` that follow `path`.
BitVector path_mask(const Dataset& data, const LeafPath& path);
SufficientStats leaf_stats(const Dataset& data, VariableId v, const LeafPath& path);

// Splits the leaf of `v` reached by `path` on `test`, with counts taken from
// `data`. Throws StructuralError if `test` does not precede `v` or already
// occurs on the path, LookupError if `path` does not end at a leaf.
BayesianNetwork apply_split(const BayesianNetwork& bn, VariableId v, const LeafPath& path,
                            VariableId test, const Dataset& data);

// Recounts every leaf from `data` and re-estimates with the network's alpha.
BayesianNetwork fit(const BayesianNetwork& bn, const Dataset& data);

void check_schema(const BayesianNetwork& bn, const Dataset& data);

}  // namespace tbn
