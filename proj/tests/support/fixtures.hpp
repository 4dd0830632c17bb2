#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbn/model/dataset.hpp"
#include "tbn/model/network.hpp"
#include "tbn/random.hpp"
#include "tbn/sdd/manager.hpp"
#include "tbn/sdd/wmc.hpp"

namespace tbn::testing {

// Clauses use DIMACS literals over variables 1..vars.
struct Cnf {
  std::uint32_t vars = 0;
  std::vector<std::vector<int>> clauses;
};

Cnf random_cnf(Rng& rng, std::uint32_t vars, std::size_t clauses, std::size_t width);
// Bit i-1 of `assignment` is variable i.
bool cnf_holds(const Cnf& cnf, std::uint64_t assignment);
std::uint64_t truth_table_count(const Cnf& cnf);

sdd::Vtree linear_vtree(std::uint32_t vars);
sdd::Vtree shuffled_vtree(Rng& rng, std::uint32_t vars);
sdd::Sdd compile_cnf(sdd::SddManager& m, const Cnf& cnf);
// A random function built by mixing conjoin/disjoin/negate over literals.
sdd::Sdd random_sdd(Rng& rng, sdd::SddManager& m, std::uint32_t vars, int depth);

// Evaluates the circuit on one assignment by walking decision nodes, without
// going through apply or model counting.
bool sdd_holds(const sdd::SddManager& m, sdd::NodeId root, std::uint64_t assignment);
double brute_force_wmc(const sdd::SddManager& m, const sdd::Sdd& root,
                       const sdd::WeightMap<double>& w, std::uint32_t vars);

// Partition, compression and trimming checks on every decision node below
// root. Returns a description of the first violation, or an empty string.
std::string decision_node_violation(sdd::SddManager& m, const sdd::Sdd& root);

// Random ordering; each CPT-tree tests predecessors up to max_depth deep,
// leaves drawn from [0.05, 0.95].
BayesianNetwork random_network(Rng& rng, std::size_t vars, std::size_t max_depth);

// X -> Y with P(X=1)=0.3, P(Y=1|X=1)=0.8, P(Y=1|X=0)=0.1.
BayesianNetwork chain_xy();
BayesianNetwork single_variable(double p);
// Split on `test` with leaf probabilities for test=1 and test=0.
CptTree split_tree(VariableId test, double p_true, double p_false);
CptTree leaf_tree(double p);

// Product of CPD entries for one complete assignment (bit i = variable i).
double joint_probability(const BayesianNetwork& bn, std::uint64_t assignment);

std::vector<std::string> numbered_names(std::size_t n, const std::string& prefix = "V");

}  // namespace tbn::testing
