#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace tbn::testing {

using sdd::NodeId;
using sdd::NodeKind;
using sdd::Sdd;
using sdd::SddManager;

Cnf random_cnf(Rng& rng, std::uint32_t vars, std::size_t clauses, std::size_t width) {
  Cnf cnf;
  cnf.vars = vars;
  for (std::size_t c = 0; c < clauses; ++c) {
    std::vector<int> clause;
    for (std::size_t k = 0; k < width; ++k) {
      const int v = 1 + static_cast<int>(rng.below(vars));
      clause.push_back(rng.bernoulli(0.5) ? v : -v);
    }
    cnf.clauses.push_back(std::move(clause));
  }
  return cnf;
}

bool cnf_holds(const Cnf& cnf, std::uint64_t assignment) {
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause) {
      const bool value = (assignment >> (std::abs(lit) - 1)) & 1u;
      if (value == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::uint64_t truth_table_count(const Cnf& cnf) {
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << cnf.vars); ++a) count += cnf_holds(cnf, a);
  return count;
}

sdd::Vtree linear_vtree(std::uint32_t vars) {
  std::vector<sdd::CircuitVar> order;
  for (std::uint32_t v = 1; v <= vars; ++v) order.push_back(sdd::circuit_var(v));
  return sdd::Vtree::right_linear(order);
}

sdd::Vtree shuffled_vtree(Rng& rng, std::uint32_t vars) {
  std::vector<sdd::CircuitVar> order;
  for (std::uint32_t v = 1; v <= vars; ++v) order.push_back(sdd::circuit_var(v));
  rng.shuffle(order);
  return sdd::Vtree::right_linear(order);
}

Sdd compile_cnf(SddManager& m, const Cnf& cnf) {
  Sdd root = m.true_sdd();
  for (const auto& clause : cnf.clauses) {
    Sdd c = m.false_sdd();
    for (int lit : clause) {
      c = m.disjoin(c, m.literal(sdd::Literal::from_signed(lit)));
    }
    root = m.conjoin(root, c);
  }
  return root;
}

Sdd random_sdd(Rng& rng, SddManager& m, std::uint32_t vars, int depth) {
  if (depth == 0) {
    const auto v = sdd::circuit_var(1 + static_cast<std::uint32_t>(rng.below(vars)));
    return m.literal(v, rng.bernoulli(0.5));
  }
  const Sdd a = random_sdd(rng, m, vars, depth - 1);
  const Sdd b = random_sdd(rng, m, vars, depth - 1);
  Sdd r = rng.bernoulli(0.5) ? m.conjoin(a, b) : m.disjoin(a, b);
  if (rng.bernoulli(0.3)) r = m.negate(r);
  return r;
}

bool sdd_holds(const SddManager& m, NodeId n, std::uint64_t assignment) {
  switch (m.kind(n)) {
    case NodeKind::False:
      return false;
    case NodeKind::True:
      return true;
    case NodeKind::Literal: {
      const sdd::Literal lit = m.literal_of(n);
      const bool value = (assignment >> (sdd::number(lit.var) - 1)) & 1u;
      return value == lit.positive;
    }
    default:
      for (const sdd::Element& e : m.elements(n)) {
        if (sdd_holds(m, e.prime, assignment)) return sdd_holds(m, e.sub, assignment);
      }
      return false;
  }
}

double brute_force_wmc(const SddManager& m, const Sdd& root, const sdd::WeightMap<double>& w,
                       std::uint32_t vars) {
  double total = 0.0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars); ++a) {
    if (!sdd_holds(m, root.id(), a)) continue;
    double p = 1.0;
    for (std::uint32_t v = 1; v <= vars; ++v) {
      const auto var = sdd::circuit_var(v);
      p *= ((a >> (v - 1)) & 1u) ? w.pos(var) : w.neg(var);
    }
    total += p;
  }
  return total;
}

std::string decision_node_violation(SddManager& m, const Sdd& root) {
  std::vector<NodeId> decisions;
  m.for_each_node(root, [&](NodeId n) {
    if (m.kind(n) == NodeKind::Decision) decisions.push_back(n);
  });
  const sdd::Vtree& vt = m.vtree();
  for (NodeId n : decisions) {
    const auto elems = m.elements(n);
    const std::string where = "node " + std::to_string(n) + ": ";
    if (elems.size() < 2) return where + "fewer than two elements";
    const std::int32_t v = m.vtree_of(n);
    Sdd cover = m.false_sdd();
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const Sdd p(&m, elems[i].prime);
      if (p.is_false()) return where + "false prime";
      const std::int32_t pv = m.vtree_of(elems[i].prime);
      const std::int32_t sv = m.vtree_of(elems[i].sub);
      if (pv >= 0 && !vt.in_left(pv, v)) return where + "prime outside the left subtree";
      if (sv >= 0 && !vt.in_right(sv, v)) return where + "sub outside the right subtree";
      for (std::size_t j = i + 1; j < elems.size(); ++j) {
        if (!m.conjoin(p, Sdd(&m, elems[j].prime)).is_false()) return where + "primes overlap";
        if (elems[i].sub == elems[j].sub) return where + "uncompressed equal subs";
      }
      cover = m.disjoin(cover, p);
    }
    if (!cover.is_true()) return where + "primes do not cover";
    if (elems.size() == 2) {
      const NodeId s0 = elems[0].sub;
      const NodeId s1 = elems[1].sub;
      if ((s0 == sdd::kTrue && s1 == sdd::kFalse) || (s0 == sdd::kFalse && s1 == sdd::kTrue)) {
        return where + "untrimmed {(p,T),(~p,F)}";
      }
    }
  }
  return {};
}

namespace {

std::int32_t grow(Rng& rng, std::vector<CptTree::Node>& nodes, const std::vector<VariableId>& preds,
                  std::vector<VariableId>& path, std::size_t depth_left) {
  const auto self = static_cast<std::int32_t>(nodes.size());
  nodes.emplace_back();
  std::vector<VariableId> free;
  for (VariableId p : preds) {
    if (std::find(path.begin(), path.end(), p) == path.end()) free.push_back(p);
  }
  if (depth_left == 0 || free.empty() || rng.bernoulli(0.35)) {
    nodes[static_cast<std::size_t>(self)].prob_true = 0.05 + 0.9 * rng.uniform();
    return self;
  }
  const VariableId test = free[rng.below(free.size())];
  path.push_back(test);
  const std::int32_t t = grow(rng, nodes, preds, path, depth_left - 1);
  const std::int32_t f = grow(rng, nodes, preds, path, depth_left - 1);
  path.pop_back();
  CptTree::Node& node = nodes[static_cast<std::size_t>(self)];
  node.test = static_cast<std::int32_t>(index(test));
  node.child_true = t;
  node.child_false = f;
  return self;
}

}  // namespace

BayesianNetwork random_network(Rng& rng, std::size_t vars, std::size_t max_depth) {
  std::vector<VariableId> ordering(vars);
  for (std::size_t i = 0; i < vars; ++i) ordering[i] = variable(i);
  rng.shuffle(ordering);
  std::vector<CptTree> cpts(vars);
  for (std::size_t pos = 0; pos < vars; ++pos) {
    const std::vector<VariableId> preds(ordering.begin(), ordering.begin() + static_cast<long>(pos));
    std::vector<CptTree::Node> nodes;
    std::vector<VariableId> path;
    grow(rng, nodes, preds, path, max_depth);
    cpts[index(ordering[pos])] = CptTree(std::move(nodes));
  }
  return BayesianNetwork(numbered_names(vars), ordering, std::move(cpts), 1.0);
}

CptTree leaf_tree(double p) { return CptTree::single_leaf({}, p); }

CptTree split_tree(VariableId test, double p_true, double p_false) {
  std::vector<CptTree::Node> nodes(3);
  nodes[0].test = static_cast<std::int32_t>(index(test));
  nodes[0].child_true = 1;
  nodes[0].child_false = 2;
  nodes[1].prob_true = p_true;
  nodes[2].prob_true = p_false;
  return CptTree(std::move(nodes));
}

BayesianNetwork chain_xy() {
  return BayesianNetwork({"X", "Y"}, {variable(0), variable(1)},
                         {leaf_tree(0.3), split_tree(variable(0), 0.8, 0.1)}, 1.0);
}

BayesianNetwork single_variable(double p) {
  return BayesianNetwork({"X"}, {variable(0)}, {leaf_tree(p)}, 1.0);
}

double joint_probability(const BayesianNetwork& bn, std::uint64_t assignment) {
  double p = 1.0;
  for (std::size_t v = 0; v < bn.size(); ++v) {
    const double pt =
        bn.prob_true(variable(v), [&](VariableId u) { return ((assignment >> index(u)) & 1u) != 0; });
    p *= ((assignment >> v) & 1u) ? pt : 1.0 - pt;
  }
  return p;
}

std::vector<std::string> numbered_names(std::size_t n, const std::string& prefix) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

}  // namespace tbn::testing
