#include "tbn/model/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tbn/errors.hpp"

namespace tbn {

double estimate_leaf_prob(std::uint64_t count_true, std::uint64_t count_false, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("Dirichlet alpha must be positive, got " + std::to_string(alpha));
  }
  const double n = static_cast<double>(count_true) + static_cast<double>(count_false);
  return (static_cast<double>(count_true) + alpha) / (n + 2.0 * alpha);
}

double leaf_log_likelihood(SufficientStats counts, double prob_true) {
  double ll = 0.0;
  if (counts.count_true > 0) ll += static_cast<double>(counts.count_true) * std::log(prob_true);
  if (counts.count_false > 0) {
    ll += static_cast<double>(counts.count_false) * std::log1p(-prob_true);
  }
  return ll;
}

void check_schema(const BayesianNetwork& bn, const Dataset& data) {
  if (data.cols() != bn.size()) {
    throw SchemaError("dataset has " + std::to_string(data.cols()) + " columns, network has " +
                      std::to_string(bn.size()) + " variables");
  }
  for (std::size_t v = 0; v < bn.size(); ++v) {
    if (data.names()[v] != bn.names()[v]) {
      throw SchemaError("column " + std::to_string(v) + " is '" + data.names()[v] +
                        "' but the network expects '" + bn.names()[v] + "'");
    }
  }
}

BitVector path_mask(const Dataset& data, const LeafPath& path) {
  BitVector mask(data.rows(), true);
  for (const PathStep& step : path) {
    if (step.value) {
      mask &= data.column(step.test);
    } else {
      mask.and_not(data.column(step.test));
    }
  }
  return mask;
}

SufficientStats leaf_stats(const Dataset& data, VariableId v, const LeafPath& path) {
  const BitVector mask = path_mask(data, path);
  const std::size_t n = mask.count();
  const std::size_t t = count_and(mask, data.column(v));
  return {t, n - t};
}

double log_likelihood(const BayesianNetwork& bn, const Dataset& data) {
  check_schema(bn, data);
  if (data.empty()) return 0.0;
  double ll = 0.0;
  for (std::size_t v = 0; v < bn.size(); ++v) {
    const CptTree& tree = bn.cpt(variable(v));
    for (const CptTree::Leaf& leaf : tree.leaves()) {
      ll += leaf_log_likelihood(leaf_stats(data, variable(v), leaf.path),
                                tree.node(leaf.node).prob_true);
    }
  }
  return ll;
}

double split_gain(SufficientStats parent, SufficientStats true_branch,
                  SufficientStats false_branch, double alpha) {
  if (true_branch.count_true + false_branch.count_true != parent.count_true ||
      true_branch.count_false + false_branch.count_false != parent.count_false) {
    throw ConsistencyError("split branch counts do not partition the parent leaf");
  }
  auto smoothed = [alpha](SufficientStats s) {
    return leaf_log_likelihood(s, estimate_leaf_prob(s.count_true, s.count_false, alpha));
  };
  return smoothed(true_branch) + smoothed(false_branch) - smoothed(parent);
}

BayesianNetwork apply_split(const BayesianNetwork& bn, VariableId v, const LeafPath& path,
                            VariableId test, const Dataset& data) {
  check_schema(bn, data);
  if (index(test) >= bn.size() || !bn.precedes(test, v)) {
    throw StructuralError("split test must precede the split variable in the ordering");
  }
  if (std::any_of(path.begin(), path.end(), [test](const PathStep& s) { return s.test == test; })) {
    throw StructuralError("split test already occurs on the leaf path");
  }
  const CptTree& tree = bn.cpt(v);
  const auto leaf = tree.find_leaf(path);
  if (!leaf) throw LookupError("leaf path not found in the CPT-tree");

  LeafPath with_true = path;
  with_true.push_back({test, true});
  LeafPath with_false = path;
  with_false.push_back({test, false});
  return bn.with_cpt(v, tree.with_split(*leaf, test, leaf_stats(data, v, with_true),
                                        leaf_stats(data, v, with_false), bn.alpha()));
}

BayesianNetwork fit(const BayesianNetwork& bn, const Dataset& data) {
  check_schema(bn, data);
  std::vector<CptTree> cpts;
  cpts.reserve(bn.size());
  for (std::size_t v = 0; v < bn.size(); ++v) {
    const CptTree& tree = bn.cpt(variable(v));
    std::vector<CptTree::Node> nodes = tree.nodes();
    for (const CptTree::Leaf& leaf : tree.leaves()) {
      CptTree::Node& n = nodes[leaf.node];
      n.counts = leaf_stats(data, variable(v), leaf.path);
      n.prob_true = estimate_leaf_prob(n.counts.count_true, n.counts.count_false, bn.alpha());
    }
    cpts.emplace_back(std::move(nodes));
  }
  return BayesianNetwork(bn.names(), bn.ordering(), std::move(cpts), bn.alpha());
}

}  // namespace tbn
