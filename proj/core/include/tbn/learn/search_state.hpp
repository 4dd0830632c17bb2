#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "tbn/compiler/encoder.hpp"
#include "tbn/learn/config.hpp"
#include "tbn/learn/trace.hpp"
#include "tbn/model/dataset.hpp"
#include "tbn/model/network.hpp"

namespace tbn::learn {

using Clock = std::chrono::steady_clock;

struct SplitCandidate {
  VariableId variable{};
  LeafPath path;
  VariableId test{};
  double delta_ll = 0.0;
  double delta_ll_per_example = 0.0;
  std::optional<std::int64_t> delta_size;
  double penalized_score = 0.0;  // meaningful once delta_size is known
};

// One ordering-based search: the current network, its compilation, the tabu
// list and the events so far. Holds a reference to the training data, which
// must outlive it.
class SearchState {
 public:
  // Independent trees fit to `train` at config.search_alpha(), compiled with
  // config.max_sdd_size. Throws TractabilityBoundError when even that model
  // is too large.
  SearchState(const Dataset& train, const LearnConfig& config, std::vector<VariableId> ordering,
              std::size_t restart = 0);

  const BayesianNetwork& network() const noexcept { return network_; }
  const compiler::CompiledModel& compiled() const noexcept { return model_; }
  const std::deque<std::size_t>& tabu() const noexcept { return tabu_; }
  double train_log_likelihood() const noexcept { return train_ll_; }
  // LL/N - kappa * size
  double penalized_score() const;
  LearnTrace& trace() noexcept { return trace_; }
  const LearnTrace& trace() const noexcept { return trace_; }

  // Every legal split of every leaf, best likelihood gain first.
  std::vector<SplitCandidate> candidates() const;

  // Greedy growth until no candidate qualifies or the deadline passes.
  // Returns the number of committed splits.
  std::size_t grow_trees(Clock::time_point deadline = Clock::time_point::max());

  // N * mutual information of the variables at positions i and i+1.
  double swap_upper_bound(std::size_t i) const;

  // Exchanges positions i and i+1 and resets the swapped variables' trees.
  // Returns false (state unchanged) when the move is tabu. Throws
  // TractabilityBoundError, leaving the state unchanged, when the
  // recompiled model exceeds the size bound.
  bool apply_swap(std::size_t i);

  // Applies the admissible non-tabu swap with the highest bound. Returns
  // false when no swap can be made.
  bool swap_step();

 private:
  TraceRecord& record(const char* event);
  void refresh_candidates(VariableId v);
  CptTree reset_tree(VariableId v) const;

  const Dataset& train_;
  LearnConfig config_;
  double alpha_;
  double n_;  // training rows as a double
  std::size_t restart_;
  BayesianNetwork network_;
  compiler::CompiledModel model_;
  double train_ll_ = 0.0;
  std::deque<std::size_t> tabu_;
  std::vector<std::vector<SplitCandidate>> cache_;  // per variable
  std::vector<double> pair_bound_;                  // V x V, N * MI
  LearnTrace trace_;
};

// N * MI of two columns with cell probabilities (n_ab + alpha) / (N + 4 alpha).
double pair_information_bound(const Dataset& data, VariableId a, VariableId b, double alpha);

}  // namespace tbn::learn
