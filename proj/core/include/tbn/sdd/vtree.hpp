#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tbn::sdd {

// Circuit variables are numbered from 1 so they can be written as signed
// literals.
enum class CircuitVar : std::uint32_t {};

constexpr std::uint32_t number(CircuitVar v) noexcept { return static_cast<std::uint32_t>(v); }
constexpr CircuitVar circuit_var(std::uint32_t n) noexcept { return static_cast<CircuitVar>(n); }

struct Literal {
  CircuitVar var;
  bool positive = true;

  static Literal from_signed(std::int64_t lit);
  std::int64_t to_signed() const noexcept {
    return positive ? static_cast<std::int64_t>(number(var))
                    : -static_cast<std::int64_t>(number(var));
  }
  Literal operator!() const noexcept { return {var, !positive}; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

// Full binary tree over circuit variables. Node ids are the in-order
// positions 0..2n-2, so the subtree of node v is the id range
// [first(v), last(v)] and its left/right subtrees are the parts below/above v.
class Vtree {
 public:
  struct Node {
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t parent = -1;
    std::uint32_t var = 0;  // 0 for internal nodes
    std::int32_t first = 0;
    std::int32_t last = 0;

    bool is_leaf() const noexcept { return left < 0; }
  };

  // The empty vtree; only the constants live over it.
  Vtree() = default;

  // internal(leaf v0, internal(leaf v1, ... leaf v_{n-1})). Throws InputError
  // on empty or duplicate orderings.
  static Vtree right_linear(std::span<const CircuitVar> ordering);

  // Builds from explicit nodes indexed by in-order id. Throws ParseError if
  // the ids are not a consistent in-order numbering of a full binary tree.
  static Vtree from_nodes(std::vector<Node> nodes);

  bool empty() const noexcept { return nodes_.empty(); }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t var_count() const noexcept { return leaf_of_.empty() ? 0 : count_; }
  std::uint32_t max_var() const noexcept {
    return leaf_of_.empty() ? 0 : static_cast<std::uint32_t>(leaf_of_.size() - 1);
  }
  std::int32_t root() const noexcept { return root_; }
  const Node& node(std::int32_t id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  bool contains(CircuitVar v) const noexcept {
    return number(v) < leaf_of_.size() && leaf_of_[number(v)] >= 0;
  }
  std::int32_t leaf_of(CircuitVar v) const;
  // Variables in left-to-right leaf order.
  std::vector<CircuitVar> variables() const;

  bool in_subtree(std::int32_t u, std::int32_t v) const noexcept {
    const Node& n = nodes_[static_cast<std::size_t>(v)];
    return n.first <= u && u <= n.last;
  }
  bool in_left(std::int32_t u, std::int32_t v) const noexcept {
    return nodes_[static_cast<std::size_t>(v)].first <= u && u < v;
  }
  bool in_right(std::int32_t u, std::int32_t v) const noexcept {
    return v < u && u <= nodes_[static_cast<std::size_t>(v)].last;
  }
  std::int32_t lca(std::int32_t u, std::int32_t v) const noexcept;

  friend bool operator==(const Vtree& a, const Vtree& b) {
    if (a.nodes_.size() != b.nodes_.size()) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
      const Node& x = a.nodes_[i];
      const Node& y = b.nodes_[i];
      if (x.left != y.left || x.right != y.right || x.var != y.var) return false;
    }
    return true;
  }

 private:
  void index();

  std::vector<Node> nodes_;
  std::vector<std::int32_t> leaf_of_;  // by circuit variable number, -1 if absent
  std::size_t count_ = 0;
  std::int32_t root_ = -1;
};

}  // namespace tbn::sdd
