#include "tbn/query/query.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "tbn/errors.hpp"
#include "tbn/sdd/wmc.hpp"

namespace tbn::query {

using sdd::ShiftPolynomial;

Evidence parse_evidence(const std::string& text, const BayesianNetwork& bn) {
  Evidence out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    item = item.substr(b, e - b + 1);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size()) {
      throw InputError("expected NAME=0 or NAME=1, got '" + item + "'");
    }
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (value != "0" && value != "1") {
      throw InputError("value of '" + name + "' must be 0 or 1, got '" + value + "'");
    }
    const auto& names = bn.names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputError("unknown variable '" + name + "'");
    out.emplace_back(variable(static_cast<std::size_t>(it - names.begin())), value == "1");
  }
  return out;
}

GroupSpec make_group(const std::vector<data::VariableMeta>& meta, data::Group group) {
  GroupSpec spec;
  spec.group = group;
  std::map<std::string, std::size_t> t2_by_code;
  for (std::size_t i = 0; i < meta.size(); ++i) {
    const auto& m = meta[i];
    if (m.kind == data::VarKind::Disease && m.group == group && m.period == data::Period::T2) {
      t2_by_code[m.code()] = i;
    }
  }
  for (std::size_t i = 0; i < meta.size(); ++i) {
    const auto& m = meta[i];
    if (m.kind != data::VarKind::Disease || m.group != group || m.period != data::Period::T1) {
      continue;
    }
    const auto it = t2_by_code.find(m.code());
    if (it == t2_by_code.end()) {
      throw SchemaError("T1 disease '" + m.name + "' has no T2 counterpart");
    }
    spec.t1.push_back(variable(i));
    spec.t2.push_back(variable(it->second));
    t2_by_code.erase(it);
  }
  if (!t2_by_code.empty()) {
    throw SchemaError("T2 disease '" + meta[t2_by_code.begin()->second].name +
                      "' has no T1 counterpart");
  }
  return spec;
}

void check_group(const GroupSpec& spec, std::size_t variable_count) {
  if (spec.t1.size() != spec.t2.size()) {
    throw InputError("group needs as many T1 as T2 variables");
  }
  std::set<std::size_t> seen;
  for (const auto* side : {&spec.t1, &spec.t2}) {
    for (VariableId v : *side) {
      if (index(v) >= variable_count) throw InputError("group refers to an unknown variable");
      if (!seen.insert(index(v)).second) {
        throw InputError("group variables must be distinct across periods");
      }
    }
  }
}

double probability(const CompiledModel& model, const Evidence& target, const Evidence& given) {
  const auto& m = model.manager();
  const double denominator = sdd::wmc(m, model.root(), compiler::condition_on_evidence(model, given));
  if (!(denominator > 0.0)) {
    throw UndefinedConditionalError("conditioning evidence has probability zero");
  }
  Evidence joint = given;
  std::map<std::size_t, bool> fixed;
  for (const auto& [v, value] : given) fixed[index(v)] = value;
  for (const auto& [v, value] : target) {
    if (index(v) >= model.network().size()) {
      throw InputError("target refers to unknown variable " + std::to_string(index(v)));
    }
    const auto [it, inserted] = fixed.emplace(index(v), value);
    if (!inserted && it->second != value) return 0.0;
    joint.emplace_back(v, value);
  }
  const double numerator = sdd::wmc(m, model.root(), compiler::condition_on_evidence(model, joint));
  return std::clamp(numerator / denominator, 0.0, 1.0);
}

ShiftPolynomial count_difference(const CompiledModel& model, const GroupSpec& spec,
                                 const Evidence& given) {
  check_group(spec, model.network().size());
  const sdd::WeightMap<double> real = compiler::condition_on_evidence(model, given);
  const auto& enc = model.encoding();
  sdd::WeightMap<ShiftPolynomial> w(real.max_var());
  for (sdd::CircuitVar c : model.manager().vtree().variables()) {
    w.set(c, ShiftPolynomial::monomial(0, real.pos(c)), ShiftPolynomial::monomial(0, real.neg(c)));
  }
  for (VariableId v : spec.t2) {
    const sdd::CircuitVar c = enc.indicator(v);
    w.set(c, ShiftPolynomial::monomial(1, real.pos(c)), ShiftPolynomial::monomial(0, real.neg(c)));
  }
  for (VariableId v : spec.t1) {
    const sdd::CircuitVar c = enc.indicator(v);
    w.set(c, ShiftPolynomial::monomial(-1, real.pos(c)), ShiftPolynomial::monomial(0, real.neg(c)));
  }
  return sdd::gf_wmc(model.manager(), model.root(), w);
}

double increase_share(const ShiftPolynomial& difference) {
  double total = 0.0;
  double up = 0.0;
  for (const auto& [d, c] : difference.terms()) {
    total += c;
    if (d > 0) up += c;
  }
  if (!(total > 0.0)) throw UndefinedConditionalError("conditioning evidence has probability zero");
  return std::clamp(up / total, 0.0, 1.0);
}

IncrementDistribution increments_from(const ShiftPolynomial& difference, std::size_t k_max) {
  if (k_max < 1) throw InputError("k_max must be at least 1");
  double up = 0.0;
  for (const auto& [d, c] : difference.terms()) {
    if (d > 0) up += c;
  }
  if (!(up > 0.0)) {
    throw UndefinedConditionalError("an increase has probability zero; increments undefined");
  }
  IncrementDistribution out;
  out.p.assign(k_max, 0.0);
  double check = 0.0;
  for (const auto& [d, c] : difference.terms()) {
    if (d <= 0) continue;
    const double p = c / up;
    out.full[d] = p;
    check += p;
    if (static_cast<std::size_t>(d) <= k_max) out.p[static_cast<std::size_t>(d) - 1] = p;
  }
  if (std::abs(check - 1.0) > 1e-9) {
    throw ConsistencyError("increment distribution does not normalize");
  }
  return out;
}

double count_increase_prob(const CompiledModel& model, const GroupSpec& spec,
                           const Evidence& given) {
  return increase_share(count_difference(model, spec, given));
}

double increase_odds(const CompiledModel& model, const GroupSpec& spec, VariableId drug) {
  const double with_drug = count_increase_prob(model, spec, {{drug, true}});
  const double base = count_increase_prob(model, spec, {});
  if (!(base > 0.0)) throw UndefinedConditionalError("an increase has probability zero");
  return with_drug / base;
}

IncrementDistribution increment_distribution(const CompiledModel& model, const GroupSpec& spec,
                                             std::size_t k_max) {
  return increments_from(count_difference(model, spec, {}), k_max);
}

}  // namespace tbn::query
