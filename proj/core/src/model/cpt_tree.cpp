#include "tbn/model/cpt_tree.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "tbn/errors.hpp"
#include "tbn/model/likelihood.hpp"

namespace tbn {

namespace {

// Copies the subtree at `at` into `out` in preorder and returns its new index.
std::int32_t relayout(const std::vector<CptTree::Node>& in, std::int32_t at,
                      std::vector<CptTree::Node>& out, std::vector<bool>& seen,
                      std::vector<VariableId>& path) {
  if (at < 0 || static_cast<std::size_t>(at) >= in.size()) {
    throw StructuralError("CPT-tree child index out of range");
  }
  if (seen[static_cast<std::size_t>(at)]) {
    throw StructuralError("CPT-tree node reachable twice");
  }
  seen[static_cast<std::size_t>(at)] = true;

  const CptTree::Node& src = in[static_cast<std::size_t>(at)];
  const auto self = static_cast<std::int32_t>(out.size());
  out.push_back(src);
  if (src.is_leaf()) {
    out.back().child_true = out.back().child_false = -1;
    return self;
  }
  const VariableId test = src.test_variable();
  if (std::find(path.begin(), path.end(), test) != path.end()) {
    throw StructuralError("variable " + std::to_string(index(test)) +
                          " tested twice on one CPT-tree path");
  }
  path.push_back(test);
  const std::int32_t t = relayout(in, src.child_true, out, seen, path);
  const std::int32_t f = relayout(in, src.child_false, out, seen, path);
  path.pop_back();
  out[static_cast<std::size_t>(self)].child_true = t;
  out[static_cast<std::size_t>(self)].child_false = f;
  return self;
}

}  // namespace

CptTree::CptTree() : nodes_(1) {}

CptTree::CptTree(std::vector<Node> nodes) {
  if (nodes.empty()) throw StructuralError("CPT-tree needs at least one node");
  std::vector<bool> seen(nodes.size(), false);
  std::vector<VariableId> path;
  nodes_.reserve(nodes.size());
  relayout(nodes, 0, nodes_, seen, path);
  if (nodes_.size() != nodes.size()) throw StructuralError("CPT-tree has unreachable nodes");
  for (const Node& n : nodes_) {
    if (n.is_leaf() && !(n.prob_true > 0.0 && n.prob_true < 1.0)) {
      throw StructuralError("CPT-tree leaf probability must lie strictly inside (0,1)");
    }
  }
}

CptTree CptTree::single_leaf(SufficientStats counts, double prob_true) {
  Node n;
  n.counts = counts;
  n.prob_true = prob_true;
  return CptTree(std::vector<Node>{n});
}

std::vector<CptTree::Leaf> CptTree::leaves() const {
  std::vector<Leaf> out;
  LeafPath path;
  std::function<void(std::size_t)> visit = [&](std::size_t at) {
    const Node& n = nodes_[at];
    if (n.is_leaf()) {
      out.push_back({at, path});
      return;
    }
    path.push_back({n.test_variable(), true});
    visit(static_cast<std::size_t>(n.child_true));
    path.back().value = false;
    visit(static_cast<std::size_t>(n.child_false));
    path.pop_back();
  };
  visit(0);
  return out;
}

std::size_t CptTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::size_t CptTree::depth() const {
  std::size_t best = 0;
  for (const Leaf& l : leaves()) best = std::max(best, l.path.size());
  return best;
}

std::vector<VariableId> CptTree::tests() const {
  std::vector<VariableId> out;
  for (const Node& n : nodes_) {
    if (!n.is_leaf()) out.push_back(n.test_variable());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool CptTree::tests_variable(VariableId v) const noexcept {
  return std::any_of(nodes_.begin(), nodes_.end(), [v](const Node& n) {
    return !n.is_leaf() && n.test_variable() == v;
  });
}

std::optional<std::size_t> CptTree::find_leaf(const LeafPath& path) const {
  std::size_t at = 0;
  for (const PathStep& step : path) {
    const Node& n = nodes_[at];
    if (n.is_leaf() || n.test_variable() != step.test) return std::nullopt;
    at = static_cast<std::size_t>(step.value ? n.child_true : n.child_false);
  }
  if (!nodes_[at].is_leaf()) return std::nullopt;
  return at;
}

CptTree CptTree::with_split(std::size_t leaf_node, VariableId test,
                            SufficientStats true_branch, SufficientStats false_branch,
                            double alpha) const {
  if (leaf_node >= nodes_.size() || !nodes_[leaf_node].is_leaf()) {
    throw LookupError("split target is not a leaf");
  }
  std::vector<Node> nodes = nodes_;
  Node t;
  t.counts = true_branch;
  t.prob_true = estimate_leaf_prob(true_branch.count_true, true_branch.count_false, alpha);
  Node f;
  f.counts = false_branch;
  f.prob_true = estimate_leaf_prob(false_branch.count_true, false_branch.count_false, alpha);
  nodes.push_back(t);
  nodes.push_back(f);
  Node& parent = nodes[leaf_node];
  parent.test = static_cast<std::int32_t>(index(test));
  parent.child_true = static_cast<std::int32_t>(nodes.size() - 2);
  parent.child_false = static_cast<std::int32_t>(nodes.size() - 1);
  return CptTree(std::move(nodes));
}

CptTree CptTree::refit(double alpha) const {
  CptTree out = *this;
  for (Node& n : out.nodes_) {
    n.prob_true = estimate_leaf_prob(n.counts.count_true, n.counts.count_false, alpha);
  }
  return out;
}

}  // namespace tbn
