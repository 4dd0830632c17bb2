#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tbn/model/types.hpp"

namespace tbn {

// Binary decision tree over predecessor variables. Nodes are kept in
// preorder (true branch before false branch), so nodes()[0] is the root and
// the order of leaves in nodes() is the leaf order used by the encoder.
class CptTree {
 public:
  struct Node {
    std::int32_t test = -1;  // variable index, or -1 for a leaf
    std::int32_t child_true = -1;
    std::int32_t child_false = -1;
    SufficientStats counts;
    double prob_true = 0.5;

    bool is_leaf() const noexcept { return test < 0; }
    VariableId test_variable() const noexcept { return variable(static_cast<std::size_t>(test)); }

    friend bool operator==(const Node&, const Node&) = default;
  };

  struct Leaf {
    std::size_t node;  // index into nodes()
    LeafPath path;
  };

  CptTree();
  // Nodes may be given in any layout reachable from nodes[0]; they are
  // re-laid out in preorder. Throws StructuralError on malformed trees.
  explicit CptTree(std::vector<Node> nodes);

  static CptTree single_leaf(SufficientStats counts, double prob_true);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  const Node& root() const noexcept { return nodes_.front(); }

  std::vector<Leaf> leaves() const;
  std::size_t leaf_count() const noexcept;
  std::size_t depth() const;
  // Sorted, duplicate-free.
  std::vector<VariableId> tests() const;
  bool tests_variable(VariableId v) const noexcept;

  std::optional<std::size_t> find_leaf(const LeafPath& path) const;

  // Index of the leaf reached when each test variable takes value_of(v).
  template <class ValueOf>
  std::size_t walk(ValueOf&& value_of) const {
    std::size_t at = 0;
    while (!nodes_[at].is_leaf()) {
      const Node& n = nodes_[at];
      at = static_cast<std::size_t>(value_of(n.test_variable()) ? n.child_true
                                                                 : n.child_false);
    }
    return at;
  }

  // Replaces the leaf at `leaf_node` by a split on `test` with two leaves
  // estimated from the given counts.
  CptTree with_split(std::size_t leaf_node, VariableId test,
                     SufficientStats true_branch, SufficientStats false_branch,
                     double alpha) const;

  // Re-estimates every leaf from its stored counts.
  CptTree refit(double alpha) const;

  friend bool operator==(const CptTree&, const CptTree&) = default;

 private:
  std::vector<Node> nodes_;
};

}  // namespace tbn
