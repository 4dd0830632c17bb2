#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tbn/model/cpt_tree.hpp"
#include "tbn/model/types.hpp"

namespace tbn {

// Binary Bayesian network whose structure is implied by its CPT-trees: the
// parents of X are the variables tested in X's tree, all of which must come
// before X in the ordering. Every constructor and with_* method validates
// this, so a BayesianNetwork value is always acyclic.
class BayesianNetwork {
 public:
  BayesianNetwork() = default;
  BayesianNetwork(std::vector<std::string> names, std::vector<VariableId> ordering,
                  std::vector<CptTree> cpts, double alpha);

  // Every variable an orphan with P(X=1) = 0.5 and zero counts.
  static BayesianNetwork independent(std::vector<std::string> names,
                                     std::vector<VariableId> ordering, double alpha);
  static BayesianNetwork independent(std::vector<std::string> names, double alpha);

  std::size_t size() const noexcept { return cpts_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(VariableId v) const { return names_.at(index(v)); }
  const std::vector<VariableId>& ordering() const noexcept { return ordering_; }
  std::size_t position(VariableId v) const { return position_.at(index(v)); }
  const CptTree& cpt(VariableId v) const { return cpts_.at(index(v)); }
  const std::vector<CptTree>& cpts() const noexcept { return cpts_; }
  double alpha() const noexcept { return alpha_; }

  bool precedes(VariableId a, VariableId b) const { return position(a) < position(b); }
  std::vector<VariableId> parents(VariableId v) const { return cpt(v).tests(); }
  std::size_t edge_count() const;
  std::size_t leaf_count() const;

  BayesianNetwork with_cpt(VariableId v, CptTree tree) const;
  BayesianNetwork with_ordering(std::vector<VariableId> ordering) const;
  BayesianNetwork refit(double alpha) const;

  // P(X = 1 | parents) where parent values come from value_of(VariableId).
  template <class ValueOf>
  double prob_true(VariableId v, ValueOf&& value_of) const {
    const CptTree& tree = cpt(v);
    return tree.node(tree.walk(value_of)).prob_true;
  }

  friend bool operator==(const BayesianNetwork& a, const BayesianNetwork& b) {
    return a.names_ == b.names_ && a.ordering_ == b.ordering_ && a.cpts_ == b.cpts_ &&
           a.alpha_ == b.alpha_;
  }

 private:
  void validate();

  std::vector<std::string> names_;
  std::vector<VariableId> ordering_;
  std::vector<std::size_t> position_;
  std::vector<CptTree> cpts_;
  double alpha_ = 1.0;
};

}  // namespace tbn
