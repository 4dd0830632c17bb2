#include "tbn/sdd/manager.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "tbn/errors.hpp"

namespace tbn::sdd {

// --- Sdd handle -------------------------------------------------------------

Sdd::Sdd(SddManager* manager, NodeId id) : manager_(manager), id_(id) {
  if (manager_) manager_->ref(id_);
}

Sdd::Sdd(const Sdd& other) : manager_(other.manager_), id_(other.id_) {
  if (manager_) manager_->ref(id_);
}

Sdd::Sdd(Sdd&& other) noexcept : manager_(other.manager_), id_(other.id_) {
  other.manager_ = nullptr;
}

Sdd& Sdd::operator=(const Sdd& other) {
  if (this != &other) {
    if (other.manager_) other.manager_->ref(other.id_);
    release();
    manager_ = other.manager_;
    id_ = other.id_;
  }
  return *this;
}

Sdd& Sdd::operator=(Sdd&& other) noexcept {
  if (this != &other) {
    release();
    manager_ = other.manager_;
    id_ = other.id_;
    other.manager_ = nullptr;
  }
  return *this;
}

Sdd::~Sdd() { release(); }

void Sdd::release() noexcept {
  if (manager_) manager_->deref(id_);
  manager_ = nullptr;
}

// --- manager ----------------------------------------------------------------

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) noexcept {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

SddManager::SddManager(Vtree vtree) : vtree_(std::move(vtree)) {
  nodes_.resize(2);
  ext_refs_.resize(2, 0);
  nodes_[kFalse].kind = NodeKind::False;
  nodes_[kTrue].kind = NodeKind::True;
  nodes_[kFalse].negation = kTrue;
  nodes_[kTrue].negation = kFalse;
  nodes_[kFalse].has_negation = nodes_[kTrue].has_negation = true;
  literal_ids_.assign(2 * (static_cast<std::size_t>(vtree_.max_var()) + 1), kFalse);
}

void SddManager::check_owned(const Sdd& s) const {
  if (!owns(s)) throw OwnershipError("SDD node does not belong to this manager");
}

Literal SddManager::literal_of(NodeId n) const {
  const Node& node = nodes_.at(n);
  if (node.kind != NodeKind::Literal) throw LookupError("node is not a literal");
  return Literal::from_signed(node.literal);
}

NodeId SddManager::allocate() {
  if (!free_.empty()) {
    const NodeId id = free_.back();
    free_.pop_back();
    return id;
  }
  nodes_.emplace_back();
  ext_refs_.push_back(0);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId SddManager::literal_id(Literal lit) {
  const std::int32_t leaf = vtree_.leaf_of(lit.var);
  const std::size_t slot = 2 * static_cast<std::size_t>(number(lit.var)) + (lit.positive ? 1 : 0);
  if (literal_ids_[slot] != kFalse) return literal_ids_[slot];
  const NodeId id = allocate();
  Node& n = nodes_[id];
  n.kind = NodeKind::Literal;
  n.vtree = leaf;
  n.literal = lit.to_signed();
  literal_ids_[slot] = id;
  return id;
}

Sdd SddManager::literal(Literal lit) {
  return Sdd(this, literal_id(lit));
}

std::uint64_t SddManager::hash(std::int32_t v, std::span<const Element> elements) noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(v);
  for (const Element& e : elements) {
    h ^= pair_key(e.prime, e.sub) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return h ^ (h >> 29);
}

void SddManager::table_grow() {
  std::size_t live = 0;
  for (NodeId id : table_) live += id > kTrue;
  std::size_t capacity = std::max<std::size_t>(1024, table_.size());
  while (4 * live >= capacity) capacity *= 2;
  std::vector<NodeId> old = std::move(table_);
  table_.assign(capacity, kFalse);
  table_used_ = 0;
  for (NodeId id : old) {
    if (id > kTrue) table_insert(id);
  }
}

void SddManager::table_insert(NodeId id) {
  if (2 * (table_used_ + 1) > table_.size()) table_grow();
  const std::size_t mask = table_.size() - 1;
  std::size_t i = nodes_[id].hash & mask;
  while (table_[i] > kTrue) i = (i + 1) & mask;
  if (table_[i] == kFalse) ++table_used_;
  table_[i] = id;
}

void SddManager::table_erase(NodeId id) {
  const std::size_t mask = table_.size() - 1;
  for (std::size_t i = nodes_[id].hash & mask; table_[i] != kFalse; i = (i + 1) & mask) {
    if (table_[i] == id) {
      table_[i] = kTrue;
      return;
    }
  }
}

NodeId SddManager::unique(std::int32_t v, std::vector<Element> elements) {
  std::sort(elements.begin(), elements.end(), [](const Element& a, const Element& b) {
    return pair_key(a.prime, a.sub) < pair_key(b.prime, b.sub);
  });
  const std::uint64_t h = hash(v, elements);
  if (!table_.empty()) {
    const std::size_t mask = table_.size() - 1;
    for (std::size_t i = h & mask; table_[i] != kFalse; i = (i + 1) & mask) {
      const NodeId id = table_[i];
      if (id == kTrue) continue;
      const Node& n = nodes_[id];
      if (n.hash == h && n.vtree == v && n.elements == elements) return id;
    }
  }
  const NodeId id = allocate();
  Node& n = nodes_[id];
  n.kind = NodeKind::Decision;
  n.vtree = v;
  n.elements = std::move(elements);
  n.has_negation = false;
  n.hash = h;
  table_insert(id);
  ++decision_nodes_;
  decision_elements_ += nodes_[id].elements.size();
  return id;
}

NodeId SddManager::decision_id(std::int32_t v, std::vector<Element> elements) {
  std::erase_if(elements, [](const Element& e) { return e.prime == kFalse; });
  if (elements.empty()) return kFalse;

  // Compression: one element per distinct sub, primes disjoined.
  std::sort(elements.begin(), elements.end(),
            [](const Element& a, const Element& b) { return a.sub < b.sub; });
  std::vector<Element> compressed;
  compressed.reserve(elements.size());
  for (const Element& e : elements) {
    if (!compressed.empty() && compressed.back().sub == e.sub) {
      const NodeId merged = apply(Op::Or, compressed.back().prime, e.prime);
      compressed.back().prime = merged;
    } else {
      compressed.push_back(e);
    }
  }

  // Trimming.
  if (compressed.size() == 1) return compressed.front().sub;
  if (compressed.size() == 2) {
    const Element& a = compressed[0];
    const Element& b = compressed[1];
    if (a.sub == kTrue && b.sub == kFalse) return a.prime;
    if (a.sub == kFalse && b.sub == kTrue) return b.prime;
  }
  return unique(v, std::move(compressed));
}

Sdd SddManager::make_decision(std::int32_t v, std::vector<Element> elements) {
  if (v < 0 || static_cast<std::size_t>(v) >= vtree_.size() || vtree_.node(v).is_leaf()) {
    throw InputError("decision nodes must sit at an internal vtree node");
  }
  for (const Element& e : elements) {
    for (NodeId c : {e.prime, e.sub}) {
      if (c >= nodes_.size() || nodes_[c].kind == NodeKind::Free) {
        throw OwnershipError("element refers to an unknown node");
      }
    }
    const std::int32_t pv = nodes_[e.prime].vtree;
    const std::int32_t sv = nodes_[e.sub].vtree;
    if ((pv >= 0 && !vtree_.in_left(pv, v)) || (sv >= 0 && !vtree_.in_right(sv, v))) {
      throw InputError("decision element does not respect the vtree");
    }
  }
  return Sdd(this, decision_id(v, std::move(elements)));
}

std::vector<Element> SddManager::normalized(NodeId n, std::int32_t v) {
  const std::int32_t nv = nodes_[n].vtree;
  if (nv == v) return nodes_[n].elements;
  if (vtree_.in_left(nv, v)) return {{n, kTrue}, {negate_id(n), kFalse}};
  return {{kTrue, n}};
}

NodeId SddManager::apply(Op op, NodeId a, NodeId b) {
  if (op == Op::And) {
    if (a == kFalse || b == kFalse) return kFalse;
    if (a == kTrue) return b;
    if (b == kTrue || a == b) return a;
  } else {
    if (a == kTrue || b == kTrue) return kTrue;
    if (a == kFalse) return b;
    if (b == kFalse || a == b) return a;
  }
  if (a > b) std::swap(a, b);
  ApplyCache& cache = op == Op::And ? and_cache_ : or_cache_;
  const std::uint64_t key = pair_key(a, b);
  if (const NodeId* hit = cache.find(key)) return *hit;

  NodeId result;
  const std::int32_t va = nodes_[a].vtree;
  const std::int32_t vb = nodes_[b].vtree;
  if (va == vb && nodes_[a].kind == NodeKind::Literal) {
    // Distinct literals on one leaf are complementary.
    result = op == Op::And ? kFalse : kTrue;
  } else {
    const std::int32_t v = va == vb ? va : vtree_.lca(va, vb);
    const std::vector<Element> ea = normalized(a, v);
    const std::vector<Element> eb = normalized(b, v);
    std::vector<Element> product;
    product.reserve(ea.size() * eb.size());
    for (const Element& x : ea) {
      for (const Element& y : eb) {
        const NodeId prime = apply(Op::And, x.prime, y.prime);
        if (prime == kFalse) continue;
        product.push_back({prime, apply(op, x.sub, y.sub)});
      }
    }
    result = decision_id(v, std::move(product));
  }
  cache.insert(key, result);
  return result;
}

NodeId SddManager::negate_id(NodeId a) {
  Node& n = nodes_[a];
  if (n.has_negation) return n.negation;
  NodeId result;
  if (n.kind == NodeKind::Literal) {
    result = literal_id(!Literal::from_signed(n.literal));
  } else {
    std::vector<Element> elements = n.elements;
    const std::int32_t v = n.vtree;
    for (Element& e : elements) e.sub = negate_id(e.sub);
    result = unique(v, std::move(elements));
  }
  nodes_[a].negation = result;
  nodes_[a].has_negation = true;
  nodes_[result].negation = a;
  nodes_[result].has_negation = true;
  return result;
}

NodeId SddManager::condition_id(NodeId a, Literal lit, std::int32_t leaf,
                                std::unordered_map<NodeId, NodeId>& memo) {
  const Node& n = nodes_[a];
  switch (n.kind) {
    case NodeKind::False:
    case NodeKind::True:
      return a;
    case NodeKind::Literal: {
      if (n.vtree != leaf) return a;
      return Literal::from_signed(n.literal) == lit ? kTrue : kFalse;
    }
    default:
      break;
  }
  const std::int32_t v = n.vtree;
  if (!vtree_.in_subtree(leaf, v)) return a;
  if (auto it = memo.find(a); it != memo.end()) return it->second;

  std::vector<Element> elements = n.elements;
  const bool left = vtree_.in_left(leaf, v);
  for (Element& e : elements) {
    if (left) {
      e.prime = condition_id(e.prime, lit, leaf, memo);
    } else {
      e.sub = condition_id(e.sub, lit, leaf, memo);
    }
  }
  const NodeId result = decision_id(v, std::move(elements));
  memo.emplace(a, result);
  return result;
}

void SddManager::maybe_collect() {
  if (decision_nodes_ < gc_threshold_) return;
  garbage_collect();
  gc_threshold_ = std::max<std::size_t>(1u << 16, 2 * decision_nodes_);
}

Sdd SddManager::conjoin(const Sdd& a, const Sdd& b) {
  check_owned(a);
  check_owned(b);
  maybe_collect();
  return Sdd(this, apply(Op::And, a.id(), b.id()));
}

Sdd SddManager::disjoin(const Sdd& a, const Sdd& b) {
  check_owned(a);
  check_owned(b);
  maybe_collect();
  return Sdd(this, apply(Op::Or, a.id(), b.id()));
}

Sdd SddManager::negate(const Sdd& a) {
  check_owned(a);
  maybe_collect();
  return Sdd(this, negate_id(a.id()));
}

Sdd SddManager::condition(const Sdd& a, Literal lit) {
  check_owned(a);
  const std::int32_t leaf = vtree_.leaf_of(lit.var);
  maybe_collect();
  std::unordered_map<NodeId, NodeId> memo;
  return Sdd(this, condition_id(a.id(), lit, leaf, memo));
}

template <class Visit>
void SddManager::traverse(NodeId root, Visit&& visit) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
  seen[root] = true;
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const Node& n = nodes_[id];
    if (next < 2 * n.elements.size()) {
      const Element& e = n.elements[next / 2];
      const NodeId child = next % 2 == 0 ? e.prime : e.sub;
      ++next;
      if (!seen[child]) {
        seen[child] = true;
        stack.push_back({child, 0});
      }
      continue;
    }
    const NodeId done = id;
    stack.pop_back();
    visit(done);
  }
}

void SddManager::for_each_node(const Sdd& root, const std::function<void(NodeId)>& visit) const {
  check_owned(root);
  traverse(root.id(), visit);
}

std::size_t SddManager::size(const Sdd& root) const {
  check_owned(root);
  std::size_t elements = 0;
  traverse(root.id(), [&](NodeId id) { elements += nodes_[id].elements.size(); });
  return elements;
}

std::size_t SddManager::node_count(const Sdd& root) const {
  check_owned(root);
  std::size_t count = 0;
  traverse(root.id(), [&](NodeId id) { count += nodes_[id].kind == NodeKind::Decision; });
  return count;
}

std::vector<bool> SddManager::mark_live() const {
  std::vector<bool> live(nodes_.size(), false);
  std::vector<NodeId> stack;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (ext_refs_[id] > 0 && nodes_[id].kind != NodeKind::Free) {
      live[id] = true;
      stack.push_back(id);
    }
  }
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    for (const Element& e : nodes_[id].elements) {
      for (NodeId c : {e.prime, e.sub}) {
        if (!live[c]) {
          live[c] = true;
          stack.push_back(c);
        }
      }
    }
  }
  return live;
}

std::size_t SddManager::live_size() const {
  const std::vector<bool> live = mark_live();
  std::size_t elements = 0;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (live[id]) elements += nodes_[id].elements.size();
  }
  return elements;
}

std::size_t SddManager::live_node_count() const {
  const std::vector<bool> live = mark_live();
  std::size_t count = 0;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    count += live[id] && nodes_[id].kind == NodeKind::Decision;
  }
  return count;
}

void SddManager::clear_cache() {
  and_cache_.clear();
  or_cache_.clear();
  for (NodeId id = 2; id < nodes_.size(); ++id) nodes_[id].has_negation = false;
}

void SddManager::garbage_collect() {
  const std::vector<bool> live = mark_live();
  clear_cache();
  for (NodeId id = 2; id < nodes_.size(); ++id) {
    Node& n = nodes_[id];
    if (n.kind != NodeKind::Decision || live[id]) continue;
    table_erase(id);
    decision_elements_ -= n.elements.size();
    n = Node{};
    free_.push_back(id);
    --decision_nodes_;
  }
  // Drop tombstones.
  table_grow();
}

// --- apply cache ----------------------------------------------------------------

const NodeId* SddManager::ApplyCache::find(std::uint64_t key) const noexcept {
  if (slots_.empty()) return nullptr;
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t i = ((key * 0x9e3779b97f4a7c15ull) >> 20) & mask; slots_[i].key != 0;
       i = (i + 1) & mask) {
    if (slots_[i].key == key) return &slots_[i].value;
  }
  return nullptr;
}

void SddManager::ApplyCache::insert(std::uint64_t key, NodeId value) {
  if (2 * (used_ + 1) > slots_.size()) {
    std::vector<Entry> old = std::move(slots_);
    slots_.assign(std::max<std::size_t>(1024, 2 * old.size()), Entry{});
    used_ = 0;
    for (const Entry& e : old) {
      if (e.key != 0) insert(e.key, e.value);
    }
  }
  const std::size_t mask = slots_.size() - 1;
  std::size_t i = ((key * 0x9e3779b97f4a7c15ull) >> 20) & mask;
  while (slots_[i].key != 0 && slots_[i].key != key) i = (i + 1) & mask;
  if (slots_[i].key == 0) ++used_;
  slots_[i] = {key, value};
}

void SddManager::ApplyCache::clear() {
  slots_.clear();
  used_ = 0;
}

}  // namespace tbn::sdd
