#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tbn/errors.hpp"
#include "tbn/sdd/manager.hpp"
#include "tbn/sdd/shift_polynomial.hpp"

namespace tbn::sdd {

// Per-circuit-variable (positive, negative) literal weights.
template <class Value>
class WeightMap {
 public:
  WeightMap() = default;
  explicit WeightMap(std::uint32_t max_var) : weights_(max_var + 1) {}

  std::uint32_t max_var() const noexcept {
    return weights_.empty() ? 0 : static_cast<std::uint32_t>(weights_.size() - 1);
  }

  void set(CircuitVar v, Value pos, Value neg) {
    slot(v).emplace(std::move(pos), std::move(neg));
  }
  void set_literal(Literal lit, Value w) {
    auto& s = slot(lit.var);
    if (!s) throw ConfigError("weight of variable " + std::to_string(number(lit.var)) + " unset");
    (lit.positive ? s->first : s->second) = std::move(w);
  }
  bool assigned(CircuitVar v) const noexcept {
    return number(v) < weights_.size() && weights_[number(v)].has_value();
  }
  const Value& pos(CircuitVar v) const { return get(v).first; }
  const Value& neg(CircuitVar v) const { return get(v).second; }
  const Value& weight(Literal lit) const { return lit.positive ? pos(lit.var) : neg(lit.var); }

 private:
  std::optional<std::pair<Value, Value>>& slot(CircuitVar v) {
    if (number(v) >= weights_.size()) weights_.resize(number(v) + 1);
    return weights_[number(v)];
  }
  const std::pair<Value, Value>& get(CircuitVar v) const {
    if (!assigned(v)) {
      throw ConfigError("no weight assigned to circuit variable " + std::to_string(number(v)));
    }
    return *weights_[number(v)];
  }

  std::vector<std::optional<std::pair<Value, Value>>> weights_;
};

struct RealSemiring {
  using Value = double;
  static Value zero() { return 0.0; }
  static Value one() { return 1.0; }
  static Value add(const Value& a, const Value& b) { return a + b; }
  static Value mul(const Value& a, const Value& b) { return a * b; }
};

struct ShiftSemiring {
  using Value = ShiftPolynomial;
  static Value zero() { return ShiftPolynomial::zero(); }
  static Value one() { return ShiftPolynomial::one(); }
  static Value add(const Value& a, const Value& b) { return a + b; }
  static Value mul(const Value& a, const Value& b) { return a * b; }
};

// Sum over all assignments to the vtree's variables that satisfy root of the
// product of literal weights, in an arbitrary commutative semiring. Variables
// a sub-circuit does not mention are smoothed in on the fly by multiplying
// with (pos + neg) for each missing variable. One memoized bottom-up pass.
template <class Semiring>
typename Semiring::Value evaluate(const SddManager& m, const Sdd& root,
                                  const WeightMap<typename Semiring::Value>& weights) {
  using Value = typename Semiring::Value;
  if (!m.owns(root)) throw OwnershipError("SDD node does not belong to this manager");
  const Vtree& vt = m.vtree();
  if (vt.empty()) return root.is_true() ? Semiring::one() : Semiring::zero();

  // full[v]: product over variables below v of (pos + neg).
  std::vector<Value> full(vt.size());
  {
    std::vector<std::int32_t> order;
    std::vector<std::int32_t> stack{vt.root()};
    while (!stack.empty()) {
      const std::int32_t v = stack.back();
      stack.pop_back();
      order.push_back(v);
      const auto& n = vt.node(v);
      if (!n.is_leaf()) {
        stack.push_back(n.left);
        stack.push_back(n.right);
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto& n = vt.node(*it);
      const auto idx = static_cast<std::size_t>(*it);
      if (n.is_leaf()) {
        const CircuitVar var = circuit_var(n.var);
        full[idx] = Semiring::add(weights.pos(var), weights.neg(var));
      } else {
        full[idx] = Semiring::mul(full[static_cast<std::size_t>(n.left)],
                                  full[static_cast<std::size_t>(n.right)]);
      }
    }
  }

  std::unordered_map<std::uint64_t, Value> gaps;
  // Product of full[] over the variables in subtree(upper) but not subtree(lower).
  auto gap = [&](std::int32_t lower, std::int32_t upper) -> const Value& {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lower)) << 32) |
        static_cast<std::uint32_t>(upper);
    if (auto it = gaps.find(key); it != gaps.end()) return it->second;
    Value acc = Semiring::one();
    std::int32_t at = lower;
    while (at != upper) {
      const std::int32_t parent = vt.node(at).parent;
      const auto& p = vt.node(parent);
      const std::int32_t sibling = p.left == at ? p.right : p.left;
      acc = Semiring::mul(acc, full[static_cast<std::size_t>(sibling)]);
      at = parent;
    }
    return gaps.emplace(key, std::move(acc)).first->second;
  };

  std::vector<std::optional<Value>> memo(m.id_bound());
  auto raw = [&](NodeId n) -> const Value& { return *memo[n]; };

  // Value of node n over the variables of vtree node v (an ancestor-or-self
  // of n's own vtree node).
  auto scoped = [&](NodeId n, std::int32_t v) -> Value {
    switch (m.kind(n)) {
      case NodeKind::False:
        return Semiring::zero();
      case NodeKind::True:
        return full[static_cast<std::size_t>(v)];
      default: {
        const std::int32_t nv = m.vtree_of(n);
        if (nv == v) return raw(n);
        return Semiring::mul(raw(n), gap(nv, v));
      }
    }
  };

  m.for_each_node(root, [&](NodeId n) {
    switch (m.kind(n)) {
      case NodeKind::Literal:
        memo[n] = weights.weight(m.literal_of(n));
        break;
      case NodeKind::Decision: {
        const std::int32_t v = m.vtree_of(n);
        const auto& vn = vt.node(v);
        Value acc = Semiring::zero();
        for (const Element& e : m.elements(n)) {
          acc = Semiring::add(acc, Semiring::mul(scoped(e.prime, vn.left), scoped(e.sub, vn.right)));
        }
        memo[n] = std::move(acc);
        break;
      }
      default:
        break;
    }
  });
  return scoped(root.id(), vt.root());
}

inline double wmc(const SddManager& m, const Sdd& root, const WeightMap<double>& weights) {
  return evaluate<RealSemiring>(m, root, weights);
}

inline ShiftPolynomial gf_wmc(const SddManager& m, const Sdd& root,
                              const WeightMap<ShiftPolynomial>& weights) {
  return evaluate<ShiftSemiring>(m, root, weights);
}

// Unit weights for every variable of the manager's vtree.
WeightMap<double> unit_weights(const Vtree& vtree);

// Number of satisfying assignments over all vtree variables. Throws
// InputError when the vtree has more than 63 variables.
std::uint64_t model_count(const SddManager& m, const Sdd& root);

}  // namespace tbn::sdd
