#include "tbn/data/cohort.hpp"

#include <string>
#include <vector>

namespace tbn::data {

namespace {

using Node = CptTree::Node;

Node leaf(double p) {
  Node n;
  n.prob_true = p;
  return n;
}

Node split(std::size_t test, std::int32_t t, std::int32_t f) {
  Node n;
  n.test = static_cast<std::int32_t>(test);
  n.child_true = t;
  n.child_false = f;
  return n;
}

CptTree root(double p) { return CptTree::single_leaf({}, p); }

// P(X=1 | a) = a ? p1 : p0
CptTree on(std::size_t a, double p1, double p0) {
  return CptTree({split(a, 1, 2), leaf(p1), leaf(p0)});
}

// P(X=1 | a, b) = a ? pa : (b ? pb : p0)
CptTree on2(std::size_t a, double pa, std::size_t b, double pb, double p0) {
  return CptTree({split(a, 1, 2), leaf(pa), split(b, 3, 4), leaf(pb), leaf(p0)});
}

}  // namespace

Cohort cohort_spec(std::size_t samples, std::uint64_t seed) {
  struct Drug {
    const char* name;
    double prevalence;
  };
  // Baseline prevalences of the corresponding drug groups.
  const std::vector<Drug> drugs{{"C01", 0.072}, {"C10", 0.145}, {"M01", 0.123}, {"M02", 0.333}};
  const std::vector<std::string> k_codes{"K74", "K77", "K86", "K90"};
  const std::vector<std::string> l_codes{"L84", "L88", "L89", "L90"};

  enum : std::size_t { C01, C10, M01, M02 };
  // Ids: drugs 0..3, K T1 4..7, L T1 8..11, K T2 12..15, L T2 16..19.
  auto k1 = [](std::size_t i) { return 4 + i; };
  auto l1 = [](std::size_t i) { return 8 + i; };

  Cohort out;
  std::vector<std::string> names;
  for (const auto& d : drugs) {
    names.push_back(d.name);
    out.meta.push_back({d.name, VarKind::Drug, Group::None, Period::T1});
  }
  for (const auto& [codes, group] : {std::pair{k_codes, Group::K}, std::pair{l_codes, Group::L}}) {
    for (const auto& c : codes) {
      names.push_back(c + "_T1");
      out.meta.push_back({c + "_T1", VarKind::Disease, group, Period::T1});
    }
  }
  for (const auto& [codes, group] : {std::pair{k_codes, Group::K}, std::pair{l_codes, Group::L}}) {
    for (const auto& c : codes) {
      names.push_back(c + "_T2");
      out.meta.push_back({c + "_T2", VarKind::Disease, group, Period::T2});
    }
  }

  std::vector<CptTree> cpts;
  for (const auto& d : drugs) cpts.push_back(root(d.prevalence));
  // T1 diseases, some associated with a drug prescribed for them.
  cpts.push_back(on(C10, 0.35, 0.12));  // K74
  cpts.push_back(on(C01, 0.30, 0.08));  // K77
  cpts.push_back(on(C01, 0.45, 0.20));  // K86
  cpts.push_back(root(0.10));           // K90
  cpts.push_back(on(M02, 0.40, 0.20));  // L84
  cpts.push_back(root(0.08));           // L88
  cpts.push_back(on(M01, 0.35, 0.15));  // L89
  cpts.push_back(on(M02, 0.30, 0.12));  // L90
  // T2 diseases persist from T1; some onsets depend on a drug.
  cpts.push_back(on(k1(0), 0.80, 0.12));                // K74
  cpts.push_back(on2(k1(1), 0.80, C01, 0.25, 0.08));    // K77
  cpts.push_back(on2(k1(2), 0.85, M02, 0.35, 0.15));    // K86
  cpts.push_back(on(k1(3), 0.70, 0.06));                // K90
  cpts.push_back(on2(l1(0), 0.75, M01, 0.15, 0.25));    // L84
  cpts.push_back(on2(l1(1), 0.80, C10, 0.20, 0.08));    // L88
  cpts.push_back(on(l1(2), 0.80, 0.12));                // L89
  cpts.push_back(on(l1(3), 0.75, 0.10));                // L90

  std::vector<VariableId> ordering;
  for (std::size_t i = 0; i < names.size(); ++i) ordering.push_back(variable(i));
  out.spec.network = BayesianNetwork(names, std::move(ordering), std::move(cpts), 1.0);
  for (const auto& d : drugs) out.spec.prevalence[d.name] = d.prevalence;
  out.spec.samples = samples;
  out.spec.seed = seed;
  return out;
}

}  // namespace tbn::data
