#include "tbn/compiler/encoder.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "tbn/errors.hpp"

namespace tbn::compiler {

using sdd::CircuitVar;
using sdd::Sdd;

// --- EncodingMap -------------------------------------------------------------

EncodingMap EncodingMap::build(const BayesianNetwork& bn, std::size_t spare_slots) {
  EncodingMap map;
  const std::size_t n = bn.size();
  map.indicator_.resize(n);
  map.slots_.resize(n);
  map.leaf_count_.resize(n);
  std::uint32_t next = 1;
  for (VariableId v : bn.ordering()) {
    const std::size_t leaves = bn.cpt(v).leaf_count();
    map.indicator_[index(v)] = sdd::circuit_var(next++);
    map.leaf_count_[index(v)] = leaves;
    for (std::size_t i = 0; i < leaves + spare_slots; ++i) {
      map.slots_[index(v)].push_back(sdd::circuit_var(next++));
    }
  }
  map.weights_ = sdd::WeightMap<double>(next - 1);
  for (std::size_t v = 0; v < n; ++v) {
    map.weights_.set(map.indicator_[v], 1.0, 1.0);
    map.set_parameters(bn, variable(v));
  }
  return map;
}

EncodingMap EncodingMap::from_parts(std::vector<CircuitVar> indicators,
                                    std::vector<std::vector<CircuitVar>> slots,
                                    std::vector<std::size_t> leaf_counts,
                                    sdd::WeightMap<double> weights) {
  EncodingMap map;
  map.indicator_ = std::move(indicators);
  map.slots_ = std::move(slots);
  map.leaf_count_ = std::move(leaf_counts);
  map.weights_ = std::move(weights);
  return map;
}

void EncodingMap::set_parameters(const BayesianNetwork& bn, VariableId v) {
  const CptTree& tree = bn.cpt(v);
  const auto leaves = tree.leaves();
  auto& slots = slots_.at(index(v));
  if (leaves.size() > slots.size()) {
    throw StructuralError("variable '" + bn.name(v) + "' has more leaves than parameter slots");
  }
  leaf_count_[index(v)] = leaves.size();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i < leaves.size()) {
      const double p = tree.node(leaves[i].node).prob_true;
      weights_.set(slots[i], p, 1.0 - p);
    } else {
      weights_.set(slots[i], 1.0, 0.0);
    }
  }
}

CircuitVar EncodingMap::parameter(VariableId v, std::size_t leaf) const {
  if (leaf >= leaf_count_.at(index(v))) {
    throw LookupError("leaf " + std::to_string(leaf) + " out of range for variable " +
                      std::to_string(index(v)));
  }
  return slots_[index(v)][leaf];
}

std::vector<CircuitVar> EncodingMap::vtree_order(const std::vector<VariableId>& ordering) const {
  std::vector<CircuitVar> out;
  for (VariableId v : ordering) {
    out.push_back(indicator_.at(index(v)));
    for (CircuitVar c : slots_.at(index(v))) out.push_back(c);
  }
  return out;
}

// --- CompiledModel -------------------------------------------------------------

CompiledModel& CompiledModel::operator=(CompiledModel&& other) noexcept {
  if (this == &other) return *this;
  // Drop handles into the old manager before the manager itself goes away.
  root_ = Sdd{};
  fragments_.clear();
  prefix_.clear();
  suffix_.clear();
  manager_ = std::move(other.manager_);
  root_ = std::move(other.root_);
  fragments_ = std::move(other.fragments_);
  prefix_ = std::move(other.prefix_);
  suffix_ = std::move(other.suffix_);
  encoding_ = std::move(other.encoding_);
  network_ = std::move(other.network_);
  options_ = other.options_;
  fingerprint_ = other.fingerprint_;
  root_size_ = other.root_size_;
  return *this;
}

void CompiledModel::check_bound(const Sdd& node) const {
  if (manager_->allocated_element_count() <= options_.max_size) return;
  const std::size_t size = manager_->size(node);
  if (size > options_.max_size) throw TractabilityBoundError(size, options_.max_size);
}

void CompiledModel::set_root(Sdd root) {
  root_ = std::move(root);
  root_size_ = manager_->size(root_);
}

Sdd CompiledModel::fragment(const CptTree& tree, VariableId v) {
  sdd::SddManager& m = *manager_;
  const Sdd x = m.literal(encoding_.indicator(v), true);
  const Sdd not_x = m.literal(encoding_.indicator(v), false);
  Sdd result = m.true_sdd();
  const auto leaves = tree.leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const CircuitVar theta = encoding_.slot(v, i);
    const Sdd iff = m.disjoin(m.conjoin(x, m.literal(theta, true)),
                              m.conjoin(not_x, m.literal(theta, false)));
    Sdd clause = iff;
    for (const PathStep& step : leaves[i].path) {
      clause = m.disjoin(clause, m.literal(encoding_.indicator(step.test), !step.value));
    }
    result = m.conjoin(result, clause);
  }
  return result;
}

CompiledModel encode(const BayesianNetwork& bn, const EncodeOptions& options) {
  CompiledModel model;
  model.options_ = options;
  model.network_ = bn;
  model.fingerprint_ = network_fingerprint(bn);
  model.encoding_ = EncodingMap::build(bn, options.spare_parameter_slots);
  const auto order = model.encoding_.vtree_order(bn.ordering());
  model.manager_ = std::make_unique<sdd::SddManager>(
      order.empty() ? sdd::Vtree{} : sdd::Vtree::right_linear(order));

  const std::size_t n = bn.size();
  model.fragments_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const VariableId v = bn.ordering()[k];
    model.fragments_[k] = model.fragment(bn.cpt(v), v);
  }
  model.prefix_.resize(n + 1);
  model.prefix_[0] = model.manager_->true_sdd();
  for (std::size_t k = 0; k < n; ++k) {
    model.prefix_[k + 1] = model.manager_->conjoin(model.prefix_[k], model.fragments_[k]);
    model.check_bound(model.prefix_[k + 1]);
  }
  model.suffix_.resize(n + 1);
  model.suffix_[n] = model.manager_->true_sdd();
  for (std::size_t k = n; k-- > 0;) {
    model.suffix_[k] = model.manager_->conjoin(model.fragments_[k], model.suffix_[k + 1]);
    model.check_bound(model.suffix_[k]);
  }
  model.set_root(model.prefix_[n]);
  return model;
}

CompiledModel CompiledModel::from_parts(std::unique_ptr<sdd::SddManager> manager, Sdd root,
                                        EncodingMap encoding, BayesianNetwork network) {
  CompiledModel model;
  model.manager_ = std::move(manager);
  if (!model.manager_->owns(root)) throw OwnershipError("root does not belong to the manager");
  model.set_root(std::move(root));
  model.encoding_ = std::move(encoding);
  model.fingerprint_ = network_fingerprint(network);
  model.network_ = std::move(network);
  return model;
}

void CompiledModel::replace_cpt(const BayesianNetwork& updated, VariableId v) {
  if (updated.ordering() != network_.ordering()) {
    throw StructuralError("replace_cpt cannot change the ordering; re-encode instead");
  }
  const CptTree& tree = updated.cpt(v);
  if (fragments_.empty() || tree.leaf_count() > encoding_.slot_count(v)) {
    *this = encode(updated, options_);
    return;
  }
  const std::size_t n = network_.size();
  const std::size_t j = network_.position(v);
  Sdd f = fragment(tree, v);
  std::vector<Sdd> prefix = prefix_;
  std::vector<Sdd> suffix = suffix_;
  for (std::size_t k = j; k < n; ++k) {
    prefix[k + 1] = manager_->conjoin(prefix[k], k == j ? f : fragments_[k]);
    check_bound(prefix[k + 1]);
  }
  for (std::size_t k = j + 1; k-- > 0;) {
    suffix[k] = manager_->conjoin(k == j ? f : fragments_[k], suffix[k + 1]);
    check_bound(suffix[k]);
  }
  fragments_[j] = std::move(f);
  prefix_ = std::move(prefix);
  suffix_ = std::move(suffix);
  set_root(prefix_[n]);
  network_ = updated;
  encoding_.set_parameters(network_, v);
  fingerprint_ = network_fingerprint(network_);
}

void CompiledModel::refresh_weights(const BayesianNetwork& updated) {
  if (updated.ordering() != network_.ordering()) {
    throw StructuralError("refresh_weights cannot change the ordering");
  }
  for (std::size_t v = 0; v < updated.size(); ++v) {
    if (updated.cpt(variable(v)).leaf_count() != encoding_.leaf_count(variable(v))) {
      throw StructuralError("refresh_weights cannot change CPT-tree shapes");
    }
  }
  for (std::size_t v = 0; v < updated.size(); ++v) encoding_.set_parameters(updated, variable(v));
  network_ = updated;
  fingerprint_ = network_fingerprint(network_);
}

std::int64_t incremental_split_size(CompiledModel& model, VariableId v, const LeafPath& path,
                                    VariableId test) {
  const BayesianNetwork& bn = model.network_;
  if (index(v) >= bn.size() || index(test) >= bn.size()) {
    throw LookupError("split refers to an unknown variable");
  }
  if (!bn.precedes(test, v)) {
    throw StructuralError("split test must precede the split variable in the ordering");
  }
  if (std::any_of(path.begin(), path.end(), [test](const PathStep& s) { return s.test == test; })) {
    throw StructuralError("split test already occurs on the leaf path");
  }
  const CptTree& tree = bn.cpt(v);
  const auto leaf = tree.find_leaf(path);
  if (!leaf) throw LookupError("leaf path not found in the CPT-tree");
  const CptTree split = tree.with_split(*leaf, test, {}, {}, bn.alpha());

  const auto before = static_cast<std::int64_t>(model.size());
  if (model.fragments_.empty() || split.leaf_count() > model.encoding_.slot_count(v)) {
    const CompiledModel trial = encode(bn.with_cpt(v, split), model.options_);
    return static_cast<std::int64_t>(trial.size()) - before;
  }
  const std::size_t j = bn.position(v);
  sdd::SddManager& m = *model.manager_;
  const Sdd f = model.fragment(split, v);
  const Sdd left = m.conjoin(model.prefix_[j], f);
  model.check_bound(left);
  const Sdd root = m.conjoin(left, model.suffix_[j + 1]);
  model.check_bound(root);
  return static_cast<std::int64_t>(m.size(root)) - before;
}

sdd::WeightMap<double> condition_on_evidence(
    const CompiledModel& model, const std::vector<std::pair<VariableId, bool>>& evidence) {
  sdd::WeightMap<double> weights = model.encoding().weights();
  const std::size_t n = model.encoding().variable_count();
  std::vector<int> seen(n, -1);
  for (const auto& [v, value] : evidence) {
    if (index(v) >= n) throw InputError("evidence refers to unknown variable " + std::to_string(index(v)));
    int& s = seen[index(v)];
    if (s >= 0 && s != static_cast<int>(value)) {
      throw InputError("contradictory evidence on variable '" + model.network().name(v) + "'");
    }
    s = static_cast<int>(value);
    weights.set_literal(sdd::Literal{model.encoding().indicator(v), !value}, 0.0);
  }
  return weights;
}

std::uint64_t network_fingerprint(const BayesianNetwork& bn) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  feed(bn.size());
  feed(std::bit_cast<std::uint64_t>(bn.alpha()));
  for (VariableId v : bn.ordering()) feed(index(v));
  for (const CptTree& tree : bn.cpts()) {
    feed(tree.nodes().size());
    for (const CptTree::Node& n : tree.nodes()) {
      feed(static_cast<std::uint64_t>(static_cast<std::int64_t>(n.test)));
      if (n.is_leaf()) feed(std::bit_cast<std::uint64_t>(n.prob_true));
    }
  }
  return h;
}

}  // namespace tbn::compiler
