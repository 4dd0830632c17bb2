#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "tbn/model/network.hpp"
#include "tbn/model/types.hpp"
#include "tbn/sdd/manager.hpp"
#include "tbn/sdd/wmc.hpp"

namespace tbn::compiler {

struct EncodeOptions {
  // Unused parameter variables reserved after each BN variable's parameters,
  // so a CPT-tree can grow without rebuilding the vtree.
  std::size_t spare_parameter_slots = 0;
  // Compilation aborts with TractabilityBoundError once the root or an
  // intermediate conjunction exceeds this many elements.
  std::size_t max_size = std::numeric_limits<std::size_t>::max();
};

// Circuit variables of the encoding. Along the vtree, each BN variable (in
// network order) contributes its indicator followed by one parameter
// variable per CPT-tree leaf in leaf order, then any spare slots.
class EncodingMap {
 public:
  EncodingMap() = default;

  std::size_t variable_count() const noexcept { return indicator_.size(); }
  sdd::CircuitVar indicator(VariableId v) const { return indicator_.at(index(v)); }
  sdd::CircuitVar parameter(VariableId v, std::size_t leaf) const;
  std::size_t leaf_count(VariableId v) const { return leaf_count_.at(index(v)); }
  std::size_t slot_count(VariableId v) const { return slots_.at(index(v)).size(); }
  sdd::CircuitVar slot(VariableId v, std::size_t i) const { return slots_.at(index(v)).at(i); }

  // Indicators weigh (1, 1); parameters (p, 1 - p); spare slots (1, 0).
  const sdd::WeightMap<double>& weights() const noexcept { return weights_; }
  std::vector<sdd::CircuitVar> vtree_order(const std::vector<VariableId>& ordering) const;

  static EncodingMap build(const BayesianNetwork& bn, std::size_t spare_slots);
  static EncodingMap from_parts(std::vector<sdd::CircuitVar> indicators,
                                std::vector<std::vector<sdd::CircuitVar>> slots,
                                std::vector<std::size_t> leaf_counts,
                                sdd::WeightMap<double> weights);
  void set_parameters(const BayesianNetwork& bn, VariableId v);

 private:
  std::vector<sdd::CircuitVar> indicator_;
  std::vector<std::vector<sdd::CircuitVar>> slots_;
  std::vector<std::size_t> leaf_count_;
  sdd::WeightMap<double> weights_;
};

// A network compiled to an SDD whose weighted model count under
// encoding().weights() is the network's joint distribution summed out.
class CompiledModel {
 public:
  CompiledModel(CompiledModel&&) noexcept = default;
  CompiledModel& operator=(CompiledModel&& other) noexcept;
  ~CompiledModel() = default;

  const sdd::SddManager& manager() const noexcept { return *manager_; }
  sdd::SddManager& manager() noexcept { return *manager_; }
  const sdd::Sdd& root() const noexcept { return root_; }
  const EncodingMap& encoding() const noexcept { return encoding_; }
  const BayesianNetwork& network() const noexcept { return network_; }
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }
  const EncodeOptions& options() const noexcept { return options_; }

  // Elements reachable from the root.
  std::size_t size() const noexcept { return root_size_; }

  // Swaps in a new CPT-tree for `v` (the rest of `updated` must match the
  // current network) and recompiles only that variable's fragment. Falls
  // back to a full encode when the variable has run out of parameter slots.
  void replace_cpt(const BayesianNetwork& updated, VariableId v);
  // Parameter-only update; the circuit is unchanged.
  void refresh_weights(const BayesianNetwork& updated);

  // Assembles a model read from files. Incremental updates on such a model
  // re-encode from scratch.
  static CompiledModel from_parts(std::unique_ptr<sdd::SddManager> manager, sdd::Sdd root,
                                  EncodingMap encoding, BayesianNetwork network);

 private:
  friend CompiledModel encode(const BayesianNetwork& bn, const EncodeOptions& options);
  friend std::int64_t incremental_split_size(CompiledModel& model, VariableId v,
                                             const LeafPath& path, VariableId test);

  CompiledModel() = default;
  sdd::Sdd fragment(const CptTree& tree, VariableId v);
  // Throws past options_.max_size. Skips the traversal while the manager
  // holds too few elements for any node to exceed the bound.
  void check_bound(const sdd::Sdd& node) const;
  void set_root(sdd::Sdd root);

  // Declared first so handles below are released before the manager dies.
  std::unique_ptr<sdd::SddManager> manager_;
  sdd::Sdd root_;
  std::vector<sdd::Sdd> fragments_;  // by ordering position
  std::vector<sdd::Sdd> prefix_;     // prefix_[k] = fragments 0..k-1 conjoined
  std::vector<sdd::Sdd> suffix_;     // suffix_[k] = fragments k..V-1 conjoined
  EncodingMap encoding_;
  BayesianNetwork network_;
  EncodeOptions options_;
  std::uint64_t fingerprint_ = 0;
  std::size_t root_size_ = 0;
};

// For every leaf l of every CPT-tree with path condition g_l, conjoins
// g_l => (x <-> theta_l), variable by variable in network order and leaves in
// preorder. Throws TractabilityBoundError past options.max_size.
CompiledModel encode(const BayesianNetwork& bn, const EncodeOptions& options = {});

// Size change of the compiled root if the leaf of `v` at `path` were split on
// `test`. Leaves the committed model untouched; trial nodes are released
// before returning. Throws StructuralError / LookupError for illegal splits
// and TractabilityBoundError when the trial exceeds the model's max_size.
std::int64_t incremental_split_size(CompiledModel& model, VariableId v, const LeafPath& path,
                                    VariableId test);

// Copy of the model's weights with the indicator literal contradicting each
// evidence assignment set to zero. Throws InputError on contradictory
// evidence or unknown variables.
sdd::WeightMap<double> condition_on_evidence(
    const CompiledModel& model, const std::vector<std::pair<VariableId, bool>>& evidence);

std::uint64_t network_fingerprint(const BayesianNetwork& bn);

}  // namespace tbn::compiler
