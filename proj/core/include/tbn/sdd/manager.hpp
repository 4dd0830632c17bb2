#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tbn/sdd/vtree.hpp"

namespace tbn::sdd {

using NodeId = std::uint32_t;

inline constexpr NodeId kFalse = 0;
inline constexpr NodeId kTrue = 1;

enum class NodeKind : std::uint8_t { False, True, Literal, Decision, Free };

struct Element {
  NodeId prime;
  NodeId sub;

  friend bool operator==(const Element&, const Element&) = default;
};

class SddManager;

// Counted reference to a node. A manager never collects a node that is
// reachable from a live handle. Handles must not outlive their manager.
class Sdd {
 public:
  Sdd() = default;
  Sdd(SddManager* manager, NodeId id);
  Sdd(const Sdd& other);
  Sdd(Sdd&& other) noexcept;
  Sdd& operator=(const Sdd& other);
  Sdd& operator=(Sdd&& other) noexcept;
  ~Sdd();

  bool valid() const noexcept { return manager_ != nullptr; }
  NodeId id() const noexcept { return id_; }
  SddManager* manager() const noexcept { return manager_; }
  bool is_true() const noexcept { return valid() && id_ == kTrue; }
  bool is_false() const noexcept { return valid() && id_ == kFalse; }

  friend bool operator==(const Sdd& a, const Sdd& b) noexcept {
    return a.manager_ == b.manager_ && a.id_ == b.id_;
  }

 private:
  void release() noexcept;

  SddManager* manager_ = nullptr;
  NodeId id_ = kFalse;
};

// Unique-table store of compressed, trimmed SDD nodes over a fixed vtree.
// Equivalent functions built in the same manager share a node id.
//
// Not thread-safe for writes: apply operations mutate the unique table and
// caches. Read-only traversals may run concurrently on a quiescent manager.
class SddManager {
 public:
  explicit SddManager(Vtree vtree);
  SddManager(const SddManager&) = delete;
  SddManager& operator=(const SddManager&) = delete;

  const Vtree& vtree() const noexcept { return vtree_; }

  Sdd true_sdd() { return Sdd(this, kTrue); }
  Sdd false_sdd() { return Sdd(this, kFalse); }
  Sdd literal(Literal lit);
  Sdd literal(CircuitVar var, bool positive) { return literal(Literal{var, positive}); }

  Sdd conjoin(const Sdd& a, const Sdd& b);
  Sdd disjoin(const Sdd& a, const Sdd& b);
  Sdd negate(const Sdd& a);
  Sdd condition(const Sdd& a, Literal lit);

  // Elements of decision nodes reachable from root.
  std::size_t size(const Sdd& root) const;
  // Decision nodes reachable from root.
  std::size_t node_count(const Sdd& root) const;
  // Elements / decision nodes reachable from any live handle.
  std::size_t live_size() const;
  std::size_t live_node_count() const;
  // Decision nodes / elements currently allocated, dead or alive. The
  // element count bounds size() of every root from above.
  std::size_t allocated_node_count() const noexcept { return decision_nodes_; }
  std::size_t allocated_element_count() const noexcept { return decision_elements_; }
  // Upper bound on node ids, for dense per-node tables.
  std::size_t id_bound() const noexcept { return nodes_.size(); }

  // Frees decision nodes unreachable from live handles and clears caches.
  void garbage_collect();
  void clear_cache();

  // Inspection. Ids come from handles or from elements of other nodes.
  NodeKind kind(NodeId n) const { return nodes_.at(n).kind; }
  std::int32_t vtree_of(NodeId n) const { return nodes_.at(n).vtree; }
  Literal literal_of(NodeId n) const;
  std::span<const Element> elements(NodeId n) const { return nodes_.at(n).elements; }
  bool owns(const Sdd& s) const noexcept {
    return s.manager() == this && s.id() < nodes_.size() && nodes_[s.id()].kind != NodeKind::Free;
  }

  // Calls visit(id) once per node reachable from root, children first.
  void for_each_node(const Sdd& root, const std::function<void(NodeId)>& visit) const;

  // Builds the canonical node for the given (prime, sub) pairs at internal
  // vtree node v: compresses equal subs, drops false primes and trims. The
  // caller is responsible for the primes forming a partition.
  Sdd make_decision(std::int32_t v, std::vector<Element> elements);

 private:
  friend class Sdd;

  enum class Op : std::uint8_t { And, Or };

  struct Node {
    NodeKind kind = NodeKind::Free;
    std::int32_t vtree = -1;
    std::int64_t literal = 0;
    std::vector<Element> elements;
    NodeId negation = kFalse;
    bool has_negation = false;
    std::uint64_t hash = 0;
  };

  // Open-addressing map from an operand pair to an apply result. Key 0 never
  // occurs because both operands of a cached apply are non-constant.
  class ApplyCache {
   public:
    const NodeId* find(std::uint64_t key) const noexcept;
    void insert(std::uint64_t key, NodeId value);
    void clear();

   private:
    struct Entry {
      std::uint64_t key = 0;
      NodeId value = kFalse;
    };
    std::vector<Entry> slots_;
    std::size_t used_ = 0;
  };

  template <class Visit>
  void traverse(NodeId root, Visit&& visit) const;

  void check_owned(const Sdd& s) const;
  void maybe_collect();
  void ref(NodeId n) noexcept { ++ext_refs_[n]; }
  void deref(NodeId n) noexcept { --ext_refs_[n]; }

  NodeId literal_id(Literal lit);
  NodeId apply(Op op, NodeId a, NodeId b);
  NodeId negate_id(NodeId a);
  NodeId condition_id(NodeId a, Literal lit, std::int32_t leaf,
                      std::unordered_map<NodeId, NodeId>& memo);
  NodeId decision_id(std::int32_t v, std::vector<Element> elements);
  NodeId unique(std::int32_t v, std::vector<Element> elements);
  std::vector<Element> normalized(NodeId n, std::int32_t v);
  NodeId allocate();
  std::vector<bool> mark_live() const;

  static std::uint64_t hash(std::int32_t v, std::span<const Element> elements) noexcept;
  void table_insert(NodeId id);
  void table_erase(NodeId id);
  void table_grow();

  Vtree vtree_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> ext_refs_;
  std::vector<NodeId> free_;
  std::vector<NodeId> literal_ids_;  // 2 * var + positive, kFalse if not built
  // Unique table: open addressing over node ids, kFalse marks an empty slot
  // and kTrue a deleted one.
  std::vector<NodeId> table_;
  std::size_t table_used_ = 0;  // live entries plus tombstones
  ApplyCache and_cache_;
  ApplyCache or_cache_;
  std::size_t decision_nodes_ = 0;
  std::size_t decision_elements_ = 0;
  std::size_t gc_threshold_ = 1u << 16;
};

}  // namespace tbn::sdd
