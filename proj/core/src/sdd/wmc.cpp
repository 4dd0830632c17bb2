#include "tbn/sdd/wmc.hpp"

namespace tbn::sdd {

namespace {

struct CountSemiring {
  using Value = std::uint64_t;
  static Value zero() { return 0; }
  static Value one() { return 1; }
  static Value add(const Value& a, const Value& b) { return a + b; }
  static Value mul(const Value& a, const Value& b) { return a * b; }
};

}  // namespace

WeightMap<double> unit_weights(const Vtree& vtree) {
  WeightMap<double> w(vtree.max_var());
  for (CircuitVar v : vtree.variables()) w.set(v, 1.0, 1.0);
  return w;
}

std::uint64_t model_count(const SddManager& m, const Sdd& root) {
  if (m.vtree().var_count() > 63) {
    throw InputError("model_count supports at most 63 variables; use wmc instead");
  }
  WeightMap<std::uint64_t> w(m.vtree().max_var());
  for (CircuitVar v : m.vtree().variables()) w.set(v, 1, 1);
  return evaluate<CountSemiring>(m, root, w);
}

}  // namespace tbn::sdd
