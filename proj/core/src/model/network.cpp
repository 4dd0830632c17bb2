#include "tbn/model/network.hpp"

#include <numeric>
#include <string>
#include <utility>

#include "tbn/errors.hpp"
#include "tbn/model/likelihood.hpp"

namespace tbn {

BayesianNetwork::BayesianNetwork(std::vector<std::string> names,
                                 std::vector<VariableId> ordering, std::vector<CptTree> cpts,
                                 double alpha)
    : names_(std::move(names)),
      ordering_(std::move(ordering)),
      cpts_(std::move(cpts)),
      alpha_(alpha) {
  validate();
}

BayesianNetwork BayesianNetwork::independent(std::vector<std::string> names,
                                             std::vector<VariableId> ordering, double alpha) {
  std::vector<CptTree> cpts(names.size(),
                            CptTree::single_leaf({}, estimate_leaf_prob(0, 0, alpha)));
  return BayesianNetwork(std::move(names), std::move(ordering), std::move(cpts), alpha);
}

BayesianNetwork BayesianNetwork::independent(std::vector<std::string> names, double alpha) {
  std::vector<VariableId> ordering(names.size());
  for (std::size_t i = 0; i < ordering.size(); ++i) ordering[i] = variable(i);
  return independent(std::move(names), std::move(ordering), alpha);
}

void BayesianNetwork::validate() {
  if (!(alpha_ > 0.0)) throw ConfigError("alpha must be positive");
  const std::size_t n = cpts_.size();
  if (names_.size() != n || ordering_.size() != n) {
    throw StructuralError("network names, ordering and CPTs disagree in size");
  }
  std::vector<std::size_t>& position = position_;
  position.assign(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t v = index(ordering_[p]);
    if (v >= n || position[v] != n) throw StructuralError("ordering is not a permutation");
    position[v] = p;
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (VariableId parent : cpts_[v].tests()) {
      if (index(parent) >= n || position[index(parent)] >= position[v]) {
        throw StructuralError("variable '" + names_[v] + "' tests '" +
                              (index(parent) < n ? names_[index(parent)] : std::string("?")) +
                              "', which does not precede it in the ordering");
      }
    }
  }
}

std::size_t BayesianNetwork::edge_count() const {
  std::size_t edges = 0;
  for (const CptTree& t : cpts_) edges += t.tests().size();
  return edges;
}

std::size_t BayesianNetwork::leaf_count() const {
  return std::accumulate(cpts_.begin(), cpts_.end(), std::size_t{0},
                         [](std::size_t acc, const CptTree& t) { return acc + t.leaf_count(); });
}

BayesianNetwork BayesianNetwork::with_cpt(VariableId v, CptTree tree) const {
  std::vector<CptTree> cpts = cpts_;
  cpts.at(index(v)) = std::move(tree);
  return BayesianNetwork(names_, ordering_, std::move(cpts), alpha_);
}

BayesianNetwork BayesianNetwork::with_ordering(std::vector<VariableId> ordering) const {
  return BayesianNetwork(names_, std::move(ordering), cpts_, alpha_);
}

BayesianNetwork BayesianNetwork::refit(double alpha) const {
  std::vector<CptTree> cpts;
  cpts.reserve(cpts_.size());
  for (const CptTree& t : cpts_) cpts.push_back(t.refit(alpha));
  return BayesianNetwork(names_, ordering_, std::move(cpts), alpha);
}

}  // namespace tbn
