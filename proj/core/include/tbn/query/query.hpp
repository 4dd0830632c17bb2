#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tbn/compiler/encoder.hpp"
#include "tbn/data/metadata.hpp"
#include "tbn/sdd/shift_polynomial.hpp"

namespace tbn::query {

using compiler::CompiledModel;

// Assignments to network variables. A variable may repeat only with the
// same value.
using Evidence = std::vector<std::pair<VariableId, bool>>;

// "NAME=1,OTHER=0"; names resolved against the network. Throws InputError.
Evidence parse_evidence(const std::string& text, const BayesianNetwork& bn);

// Disease variables of one group observed in both periods, t1[i] and t2[i]
// being the same disease code.
struct GroupSpec {
  data::Group group = data::Group::None;
  std::vector<VariableId> t1;
  std::vector<VariableId> t2;
};

// Pairs T1/T2 diseases of `group` by code, in T1 metadata order. Throws
// SchemaError for unpaired diseases.
GroupSpec make_group(const std::vector<data::VariableMeta>& meta, data::Group group);
// Throws InputError unless t1 and t2 have equal size, are disjoint, and name
// variables of the network.
void check_group(const GroupSpec& spec, std::size_t variable_count);

struct IncrementDistribution {
  // p[k - 1] = P(exactly k more diseases | more diseases), k = 1..k_max.
  std::vector<double> p;
  // Same quantity over the whole positive support.
  std::map<int, double> full;
};

// P(target | given) = wmc(target and given) / wmc(given). Contradicting
// target and given yields 0. Throws UndefinedConditionalError when
// P(given) = 0 and InputError for contradictions inside `given`.
double probability(const CompiledModel& model, const Evidence& target, const Evidence& given);

// Distribution of (#true T2 variables - #true T1 variables) jointly with
// `given`: coefficient d is P(difference = d, given). One generating-function
// pass over the circuit.
sdd::ShiftPolynomial count_difference(const CompiledModel& model, const GroupSpec& spec,
                                      const Evidence& given);

// P(#T2 > #T1 | given).
double count_increase_prob(const CompiledModel& model, const GroupSpec& spec,
                           const Evidence& given);

// P(increase | drug = 1) / P(increase).
double increase_odds(const CompiledModel& model, const GroupSpec& spec, VariableId drug);

IncrementDistribution increment_distribution(const CompiledModel& model, const GroupSpec& spec,
                                             std::size_t k_max = 4);

// Reads the increase quantities off a difference polynomial. Throws
// UndefinedConditionalError when the relevant mass is zero.
double increase_share(const sdd::ShiftPolynomial& difference);
IncrementDistribution increments_from(const sdd::ShiftPolynomial& difference, std::size_t k_max);

}  // namespace tbn::query
