#include "tbn/query/oracle.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>

#include "tbn/errors.hpp"

namespace tbn::query {

namespace {

// Bit masks (care, value) of an evidence set; nullopt on contradiction.
std::optional<std::pair<std::uint32_t, std::uint32_t>> masks(const Evidence& e, std::size_t n) {
  std::uint32_t care = 0;
  std::uint32_t value = 0;
  for (const auto& [v, x] : e) {
    if (index(v) >= n) throw InputError("evidence refers to unknown variable " + std::to_string(index(v)));
    const std::uint32_t bit = 1u << index(v);
    if ((care & bit) && static_cast<bool>(value & bit) != x) return std::nullopt;
    care |= bit;
    if (x) value |= bit;
  }
  return std::pair{care, value};
}

std::pair<std::uint32_t, std::uint32_t> given_masks(const Evidence& e, std::size_t n) {
  const auto m = masks(e, n);
  if (!m) throw InputError("contradictory evidence");
  return *m;
}

}  // namespace

JointTable brute_force_joint(const BayesianNetwork& bn) {
  const std::size_t n = bn.size();
  if (n > kMaxOracleVariables) {
    throw InputError("brute-force joint refuses " + std::to_string(n) + " variables (at most " +
                     std::to_string(kMaxOracleVariables) + ")");
  }
  JointTable joint;
  joint.variables = n;
  joint.prob.resize(std::size_t{1} << n);
  for (std::uint32_t a = 0; a < joint.prob.size(); ++a) {
    auto value_of = [a](VariableId v) { return ((a >> index(v)) & 1u) != 0; };
    double p = 1.0;
    for (std::size_t v = 0; v < n; ++v) {
      const double t = bn.prob_true(variable(v), value_of);
      p *= value_of(variable(v)) ? t : 1.0 - t;
    }
    joint.prob[a] = p;
  }
  return joint;
}

double oracle_probability(const JointTable& joint, const Evidence& target, const Evidence& given) {
  const auto [gc, gv] = given_masks(given, joint.variables);
  Evidence both = given;
  both.insert(both.end(), target.begin(), target.end());
  const auto tm = masks(both, joint.variables);
  double num = 0.0;
  double den = 0.0;
  for (std::uint32_t a = 0; a < joint.prob.size(); ++a) {
    if ((a & gc) != gv) continue;
    den += joint.prob[a];
    if (tm && (a & tm->first) == tm->second) num += joint.prob[a];
  }
  if (!(den > 0.0)) throw UndefinedConditionalError("conditioning evidence has probability zero");
  return num / den;
}

sdd::ShiftPolynomial oracle_count_difference(const JointTable& joint, const GroupSpec& spec,
                                             const Evidence& given) {
  check_group(spec, joint.variables);
  const auto [gc, gv] = given_masks(given, joint.variables);
  std::map<int, double> terms;
  for (std::uint32_t a = 0; a < joint.prob.size(); ++a) {
    if ((a & gc) != gv) continue;
    int d = 0;
    for (VariableId v : spec.t2) d += static_cast<int>((a >> index(v)) & 1u);
    for (VariableId v : spec.t1) d -= static_cast<int>((a >> index(v)) & 1u);
    terms[d] += joint.prob[a];
  }
  return sdd::ShiftPolynomial::from_terms(terms);
}

double oracle_count_increase_prob(const JointTable& joint, const GroupSpec& spec,
                                  const Evidence& given) {
  return increase_share(oracle_count_difference(joint, spec, given));
}

double oracle_increase_odds(const JointTable& joint, const GroupSpec& spec, VariableId drug) {
  return oracle_count_increase_prob(joint, spec, {{drug, true}}) /
         oracle_count_increase_prob(joint, spec, {});
}

IncrementDistribution oracle_increment_distribution(const JointTable& joint,
                                                    const GroupSpec& spec, std::size_t k_max) {
  return increments_from(oracle_count_difference(joint, spec, {}), k_max);
}

}  // namespace tbn::query
