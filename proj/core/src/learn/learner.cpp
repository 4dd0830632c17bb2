#include "tbn/learn/learner.hpp"

#include <atomic>
#include <exception>
#include <numeric>
#include <thread>

#include "tbn/errors.hpp"
#include "tbn/learn/search_state.hpp"
#include "tbn/model/likelihood.hpp"
#include "tbn/random.hpp"

namespace tbn::learn {

namespace {

struct Snapshot {
  BayesianNetwork network;
  double valid_ll;
};

struct RestartOutcome {
  LearnTrace trace;
  std::vector<Snapshot> pool;
  std::exception_ptr error;
};

void check_datasets(const Dataset& train, const Dataset& valid) {
  if (train.empty()) throw InputError("training data is empty");
  if (train.names() != valid.names()) {
    throw SchemaError("validation columns do not match the training columns");
  }
}

RestartOutcome run_restart(const Dataset& train, const Dataset& valid, const LearnConfig& config,
                           std::size_t r) {
  RestartOutcome out;
  const auto start = Clock::now();
  const double budget = config.restart_budget_seconds();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget));

  std::vector<VariableId> ordering(train.cols());
  for (std::size_t i = 0; i < ordering.size(); ++i) ordering[i] = variable(i);
  Rng rng(derive_seed(config.rng_seed, r));
  rng.shuffle(ordering);

  SearchState state(train, config, ordering, r);
  {
    std::string order_text;
    for (VariableId v : ordering) {
      if (!order_text.empty()) order_text += ',';
      order_text += train.names()[index(v)];
    }
    TraceRecord rec;
    rec.restart = r;
    rec.event = "start";
    rec.add("ordering", order_text)
        .add("ll", state.train_log_likelihood())
        .add("size", state.compiled().size())
        .add("score", state.penalized_score());
    state.trace().records.push_back(std::move(rec));
  }

  auto snapshot = [&](const char* reason) {
    const double vll = log_likelihood(state.network(), valid);
    out.pool.push_back({state.network(), vll});
    TraceRecord rec;
    rec.restart = r;
    rec.event = "snapshot";
    rec.add("reason", std::string(reason))
        .add("index", out.pool.size() - 1)
        .add("valid_ll", vll)
        .add("ll", state.train_log_likelihood())
        .add("size", state.compiled().size())
        .add("edges", state.network().edge_count())
        .add("leaves", state.network().leaf_count());
    state.trace().records.push_back(std::move(rec));
  };

  if (budget > 0.0) {
    state.grow_trees(deadline);
    snapshot("grow");
    std::size_t swaps = 0;
    while (config.max_swaps_per_restart == 0 || swaps < config.max_swaps_per_restart) {
      if (Clock::now() >= deadline) {
        TraceRecord rec;
        rec.restart = r;
        rec.event = "stop";
        rec.add("phase", std::string("restart")).add("reason", std::string("time"));
        state.trace().records.push_back(std::move(rec));
        break;
      }
      if (!state.swap_step()) {
        TraceRecord rec;
        rec.restart = r;
        rec.event = "stop";
        rec.add("phase", std::string("restart")).add("reason", std::string("no-swap"));
        state.trace().records.push_back(std::move(rec));
        break;
      }
      ++swaps;
      state.grow_trees(deadline);
      snapshot("grow");
    }
  }
  snapshot("end");
  out.trace = std::move(state.trace());
  return out;
}

}  // namespace

LearnResult learn(const Dataset& train, const Dataset& valid, const LearnConfig& config) {
  config.validate();
  check_datasets(train, valid);

  std::vector<RestartOutcome> outcomes(config.restarts);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < config.restarts; r = next++) {
      try {
        outcomes[r] = run_restart(train, valid, config, r);
      } catch (...) {
        outcomes[r].error = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(config.jobs, config.restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  LearnTrace trace;
  const Snapshot* best = nullptr;
  std::size_t best_restart = 0;
  std::size_t best_index = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (outcomes[r].error) std::rethrow_exception(outcomes[r].error);
    trace.append(outcomes[r].trace);
    for (std::size_t i = 0; i < outcomes[r].pool.size(); ++i) {
      const Snapshot& s = outcomes[r].pool[i];
      if (!best || s.valid_ll > best->valid_ll) {
        best = &s;
        best_restart = r;
        best_index = i;
      }
    }
  }

  auto add = [&trace](const char* event) -> TraceRecord& {
    TraceRecord rec;
    rec.step = trace.records.size();
    rec.event = event;
    trace.records.push_back(std::move(rec));
    return trace.records.back();
  };
  add("select")
      .add("from_restart", best_restart)
      .add("index", best_index)
      .add("valid_ll", best->valid_ll)
      .add("edges", best->network.edge_count())
      .add("leaves", best->network.leaf_count());

  double best_alpha = config.alpha_grid.front();
  double best_ll = 0.0;
  BayesianNetwork chosen;
  bool have = false;
  for (double a : config.alpha_grid) {
    BayesianNetwork refit = best->network.refit(a);
    const double vll = log_likelihood(refit, valid);
    add("refit").add("alpha", a).add("valid_ll", vll);
    if (!have || vll > best_ll) {
      have = true;
      best_ll = vll;
      best_alpha = a;
      chosen = std::move(refit);
    }
  }

  compiler::CompiledModel model = compiler::encode(chosen, {0, config.max_sdd_size});
  add("result")
      .add("alpha", best_alpha)
      .add("valid_ll", best_ll)
      .add("size", model.size())
      .add("edges", chosen.edge_count());
  const double snapshot_ll = best->valid_ll;
  return LearnResult{std::move(chosen), std::move(model), std::move(trace), best_alpha,
                     snapshot_ll, best_ll};
}

}  // namespace tbn::learn
