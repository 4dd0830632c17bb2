#include <benchmark/benchmark.h>

#include <vector>

#include "tbn/compiler/encoder.hpp"
#include "tbn/data/cohort.hpp"
#include "tbn/data/split.hpp"
#include "tbn/data/synthetic.hpp"
#include "tbn/learn/search_state.hpp"
#include "tbn/query/query.hpp"
#include "tbn/random.hpp"
#include "tbn/sdd/manager.hpp"
#include "tbn/sdd/wmc.hpp"

namespace {

using namespace tbn;

sdd::Vtree linear(std::uint32_t vars) {
  std::vector<sdd::CircuitVar> order;
  for (std::uint32_t v = 1; v <= vars; ++v) order.push_back(sdd::circuit_var(v));
  return sdd::Vtree::right_linear(order);
}

// Conjunction of random 3-clauses, rebuilt from scratch each iteration.
void BM_ApplyRandomCnf(benchmark::State& state) {
  const auto vars = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    sdd::SddManager m(linear(vars));
    Rng rng(1);
    sdd::Sdd root = m.true_sdd();
    for (std::uint32_t c = 0; c < 2 * vars; ++c) {
      sdd::Sdd clause = m.false_sdd();
      for (int k = 0; k < 3; ++k) {
        const auto v = sdd::circuit_var(1 + static_cast<std::uint32_t>(rng.below(vars)));
        clause = m.disjoin(clause, m.literal(v, rng.bernoulli(0.5)));
      }
      root = m.conjoin(root, clause);
    }
    benchmark::DoNotOptimize(root.id());
  }
}
BENCHMARK(BM_ApplyRandomCnf)->Arg(16)->Arg(24)->Arg(32);

struct CohortModel {
  data::Cohort cohort = data::cohort_spec(0, 0);
  compiler::CompiledModel model = compiler::encode(cohort.spec.effective_network());
};

const CohortModel& cohort_model() {
  static const CohortModel m;
  return m;
}

void BM_WmcCohort(benchmark::State& state) {
  const auto& c = cohort_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdd::wmc(c.model.manager(), c.model.root(), c.model.encoding().weights()));
  }
  state.counters["size"] = static_cast<double>(c.model.size());
}
BENCHMARK(BM_WmcCohort);

void BM_CountDifferenceCohort(benchmark::State& state) {
  const auto& c = cohort_model();
  const query::GroupSpec spec = query::make_group(c.cohort.meta, data::Group::K);
  for (auto _ : state) {
    benchmark::DoNotOptimize(query::count_difference(c.model, spec, {}).sum());
  }
}
BENCHMARK(BM_CountDifferenceCohort);

// One greedy growth phase from the independent model.
void BM_GrowTreesCohort(benchmark::State& state) {
  const data::Cohort cohort = data::cohort_spec(static_cast<std::size_t>(state.range(0)), 3);
  const Dataset d = data::generate(cohort.spec);
  const learn::LearnConfig config = learn::LearnConfig::desk_scale();
  std::vector<VariableId> order;
  for (std::size_t i = 0; i < d.cols(); ++i) order.push_back(variable(i));
  for (auto _ : state) {
    learn::SearchState s(d, config, order);
    benchmark::DoNotOptimize(s.grow_trees());
  }
}
BENCHMARK(BM_GrowTreesCohort)->Arg(50000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
