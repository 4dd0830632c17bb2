#include "tbn/sdd/vtree.hpp"

#include <algorithm>
#include <string>

#include "tbn/errors.hpp"

namespace tbn::sdd {

Literal Literal::from_signed(std::int64_t lit) {
  if (lit == 0) throw InputError("literal 0 is not a variable");
  const auto mag = static_cast<std::uint32_t>(lit < 0 ? -lit : lit);
  return {circuit_var(mag), lit > 0};
}

Vtree Vtree::right_linear(std::span<const CircuitVar> ordering) {
  if (ordering.empty()) throw InputError("a vtree needs at least one variable");
  const std::size_t n = ordering.size();
  Vtree t;
  t.nodes_.resize(2 * n - 1);
  // Leaf i sits at in-order id 2i; the internal node whose left leaf is i sits
  // at 2i + 1 and has the remaining right-linear chain as its right child.
  for (std::size_t i = 0; i < n; ++i) {
    t.nodes_[2 * i].var = number(ordering[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Node& in = t.nodes_[2 * i + 1];
    in.left = static_cast<std::int32_t>(2 * i);
    in.right = static_cast<std::int32_t>(i + 2 == n ? 2 * i + 2 : 2 * i + 3);
  }
  t.index();
  return t;
}

Vtree Vtree::from_nodes(std::vector<Node> nodes) {
  if (nodes.empty()) return Vtree{};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Node& n = nodes[i];
    if ((n.left < 0) != (n.right < 0)) {
      throw ParseError("vtree node " + std::to_string(i) + " has exactly one child");
    }
    n.parent = -1;
  }
  Vtree t;
  t.nodes_ = std::move(nodes);
  t.index();
  return t;
}

void Vtree::index() {
  const auto n = static_cast<std::int32_t>(nodes_.size());
  std::uint32_t max_var = 0;
  for (std::int32_t i = 0; i < n; ++i) {
    Node& node = nodes_[static_cast<std::size_t>(i)];
    if (node.is_leaf()) {
      if (node.var == 0) throw ParseError("vtree leaf " + std::to_string(i) + " has no variable");
      max_var = std::max(max_var, node.var);
      continue;
    }
    for (std::int32_t c : {node.left, node.right}) {
      if (c < 0 || c >= n) throw ParseError("vtree child id out of range");
      Node& child = nodes_[static_cast<std::size_t>(c)];
      if (child.parent >= 0) throw ParseError("vtree node has two parents");
      child.parent = i;
    }
  }
  root_ = -1;
  for (std::int32_t i = 0; i < n; ++i) {
    if (nodes_[static_cast<std::size_t>(i)].parent < 0) {
      if (root_ >= 0) throw ParseError("vtree has more than one root");
      root_ = i;
    }
  }
  if (root_ < 0) throw ParseError("vtree has no root");

  // Compute subtree ranges and check that ids are the in-order numbering.
  std::int32_t next = 0;
  std::vector<std::pair<std::int32_t, int>> stack{{root_, 0}};
  std::size_t visited = 0;
  while (!stack.empty()) {
    auto& [v, state] = stack.back();
    Node& node = nodes_[static_cast<std::size_t>(v)];
    if (node.is_leaf()) {
      if (v != next) throw ParseError("vtree ids are not in in-order");
      node.first = node.last = next++;
      ++visited;
      stack.pop_back();
      continue;
    }
    if (state == 0) {
      state = 1;
      stack.push_back({node.left, 0});
    } else if (state == 1) {
      if (v != next) throw ParseError("vtree ids are not in in-order");
      ++next;
      ++visited;
      state = 2;
      stack.push_back({node.right, 0});
    } else {
      node.first = nodes_[static_cast<std::size_t>(node.left)].first;
      node.last = nodes_[static_cast<std::size_t>(node.right)].last;
      stack.pop_back();
    }
  }
  if (visited != nodes_.size()) throw ParseError("vtree is not connected");

  leaf_of_.assign(max_var + 1, -1);
  count_ = 0;
  for (std::int32_t i = 0; i < n; ++i) {
    const Node& node = nodes_[static_cast<std::size_t>(i)];
    if (!node.is_leaf()) continue;
    if (leaf_of_[node.var] >= 0) {
      throw InputError("circuit variable " + std::to_string(node.var) + " occurs twice in vtree");
    }
    leaf_of_[node.var] = i;
    ++count_;
  }
}

std::int32_t Vtree::leaf_of(CircuitVar v) const {
  if (!contains(v)) {
    throw LookupError("circuit variable " + std::to_string(number(v)) + " is not in the vtree");
  }
  return leaf_of_[number(v)];
}

std::vector<CircuitVar> Vtree::variables() const {
  std::vector<CircuitVar> out;
  for (const Node& n : nodes_) {
    if (n.is_leaf()) out.push_back(circuit_var(n.var));
  }
  return out;
}

std::int32_t Vtree::lca(std::int32_t u, std::int32_t v) const noexcept {
  std::int32_t a = u;
  while (!in_subtree(v, a)) a = nodes_[static_cast<std::size_t>(a)].parent;
  return a;
}

}  // namespace tbn::sdd
