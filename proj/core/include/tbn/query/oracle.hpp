#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tbn/model/network.hpp"
#include "tbn/query/query.hpp"

namespace tbn::query {

inline constexpr std::size_t kMaxOracleVariables = 20;

// Exhaustive joint distribution; bit i of an assignment index is the value
// of variable i.
struct JointTable {
  std::size_t variables = 0;
  std::vector<double> prob;
};

// Direct product of CPT-tree entries for all 2^V assignments. Throws
// InputError above kMaxOracleVariables.
JointTable brute_force_joint(const BayesianNetwork& bn);

// Enumeration counterparts of the circuit queries, for testing and for
// exact ground-truth reports on small networks.
double oracle_probability(const JointTable& joint, const Evidence& target, const Evidence& given);
// Difference distribution as in count_difference.
sdd::ShiftPolynomial oracle_count_difference(const JointTable& joint, const GroupSpec& spec,
                                             const Evidence& given);
double oracle_count_increase_prob(const JointTable& joint, const GroupSpec& spec,
                                  const Evidence& given);
double oracle_increase_odds(const JointTable& joint, const GroupSpec& spec, VariableId drug);
IncrementDistribution oracle_increment_distribution(const JointTable& joint,
                                                    const GroupSpec& spec, std::size_t k_max = 4);

}  // namespace tbn::query
