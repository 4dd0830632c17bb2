#include "tbn/learn/search_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tbn/errors.hpp"
#include "tbn/model/likelihood.hpp"

namespace tbn::learn {

namespace {

std::string path_text(const BayesianNetwork& bn, const LeafPath& path) {
  if (path.empty()) return "-";
  std::string out;
  for (const PathStep& s : path) {
    if (!out.empty()) out += '&';
    out += bn.name(s.test);
    out += s.value ? ":1" : ":0";
  }
  return out;
}

BayesianNetwork initial_network(const Dataset& train, const LearnConfig& config,
                                std::vector<VariableId> ordering) {
  return fit(BayesianNetwork::independent(train.names(), std::move(ordering),
                                          config.search_alpha()),
             train);
}

compiler::EncodeOptions encode_options(const LearnConfig& config) {
  return {config.spare_parameter_slots, config.max_sdd_size};
}

bool same_candidate(const SplitCandidate& a, const SplitCandidate& b) {
  return a.variable == b.variable && a.test == b.test && a.path == b.path;
}

}  // namespace

double pair_information_bound(const Dataset& data, VariableId a, VariableId b, double alpha) {
  const double n = static_cast<double>(data.rows());
  const double n11 = static_cast<double>(count_and(data.column(a), data.column(b)));
  const double n1x = static_cast<double>(data.column(a).count());
  const double nx1 = static_cast<double>(data.column(b).count());
  const double cells[2][2] = {{n - n1x - nx1 + n11, nx1 - n11}, {n1x - n11, n11}};
  const double total = n + 4.0 * alpha;
  double p[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) p[i][j] = (cells[i][j] + alpha) / total;
  }
  double mi = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double pa = p[i][0] + p[i][1];
      const double pb = p[0][j] + p[1][j];
      mi += p[i][j] * std::log(p[i][j] / (pa * pb));
    }
  }
  return n * std::max(mi, 0.0);
}

SearchState::SearchState(const Dataset& train, const LearnConfig& config,
                         std::vector<VariableId> ordering, std::size_t restart)
    : train_(train),
      config_(config),
      alpha_(config.search_alpha()),
      n_(static_cast<double>(train.rows())),
      restart_(restart),
      network_(initial_network(train, config, std::move(ordering))),
      model_(compiler::encode(network_, encode_options(config))) {
  train_ll_ = log_likelihood(network_, train_);
  const std::size_t v_count = network_.size();
  cache_.resize(v_count);
  for (std::size_t v = 0; v < v_count; ++v) refresh_candidates(variable(v));
  pair_bound_.assign(v_count * v_count, 0.0);
  for (std::size_t a = 0; a < v_count; ++a) {
    for (std::size_t b = a + 1; b < v_count; ++b) {
      const double bound = pair_information_bound(train_, variable(a), variable(b), alpha_);
      pair_bound_[a * v_count + b] = bound;
      pair_bound_[b * v_count + a] = bound;
    }
  }
}

double SearchState::penalized_score() const {
  const double per_example = n_ > 0.0 ? train_ll_ / n_ : 0.0;
  return per_example - config_.size_penalty_kappa * static_cast<double>(model_.size());
}

TraceRecord& SearchState::record(const char* event) {
  TraceRecord r;
  r.step = trace_.records.size();
  r.restart = restart_;
  r.event = event;
  trace_.records.push_back(std::move(r));
  return trace_.records.back();
}

void SearchState::refresh_candidates(VariableId v) {
  auto& out = cache_[index(v)];
  out.clear();
  const CptTree& tree = network_.cpt(v);
  const std::size_t pos = network_.position(v);
  const BitVector& col_v = train_.column(v);
  for (const CptTree::Leaf& leaf : tree.leaves()) {
    const BitVector mask = path_mask(train_, leaf.path);
    const SufficientStats parent = tree.node(leaf.node).counts;
    for (std::size_t k = 0; k < pos; ++k) {
      const VariableId t = network_.ordering()[k];
      if (std::any_of(leaf.path.begin(), leaf.path.end(),
                      [t](const PathStep& s) { return s.test == t; })) {
        continue;
      }
      const BitVector& col_t = train_.column(t);
      const std::uint64_t rows_t = count_and(mask, col_t);
      const std::uint64_t true_t = count_and(mask, col_t, col_v);
      const SufficientStats on_true{true_t, rows_t - true_t};
      const SufficientStats on_false{parent.count_true - true_t,
                                     parent.count_false - (rows_t - true_t)};
      SplitCandidate c;
      c.variable = v;
      c.path = leaf.path;
      c.test = t;
      c.delta_ll = split_gain(parent, on_true, on_false, alpha_);
      c.delta_ll_per_example = n_ > 0.0 ? c.delta_ll / n_ : 0.0;
      out.push_back(std::move(c));
    }
  }
}

std::vector<SplitCandidate> SearchState::candidates() const {
  std::vector<SplitCandidate> all;
  for (const auto& per_var : cache_) all.insert(all.end(), per_var.begin(), per_var.end());
  std::stable_sort(all.begin(), all.end(), [](const SplitCandidate& a, const SplitCandidate& b) {
    return a.delta_ll > b.delta_ll;
  });
  return all;
}

std::size_t SearchState::grow_trees(Clock::time_point deadline) {
  const auto phase_end = [&] {
    const auto limit = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(config_.split_phase_time_limit_seconds));
    const auto now = Clock::now();
    return deadline - now < limit ? deadline : now + limit;
  }();

  std::size_t committed = 0;
  std::vector<SplitCandidate> rejected;
  while (true) {
    if (Clock::now() >= phase_end) {
      record("stop").add("phase", std::string("grow")).add("reason", std::string("time"));
      break;
    }
    std::vector<SplitCandidate> pool;
    for (SplitCandidate& c : candidates()) {
      if (c.delta_ll_per_example < config_.min_split_gain_per_example) break;
      if (std::any_of(rejected.begin(), rejected.end(),
                      [&c](const SplitCandidate& r) { return same_candidate(r, c); })) {
        continue;
      }
      pool.push_back(std::move(c));
      if (pool.size() == config_.swap_candidate_beam) break;
    }
    if (pool.empty()) break;

    const std::size_t size_before = model_.size();
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      SplitCandidate& c = pool[i];
      const char* reason = nullptr;
      try {
        c.delta_size = compiler::incremental_split_size(model_, c.variable, c.path, c.test);
        c.penalized_score = c.delta_ll_per_example -
                            config_.size_penalty_kappa * static_cast<double>(*c.delta_size);
        if (static_cast<std::int64_t>(size_before) + *c.delta_size >
            static_cast<std::int64_t>(config_.max_sdd_size)) {
          reason = "bound";
        } else if (!(c.penalized_score > 0.0)) {
          reason = "penalty";
        }
      } catch (const TractabilityBoundError&) {
        reason = "bound";
      }
      if (reason) {
        TraceRecord& r = record("reject");
        r.add("kind", std::string("split"))
            .add("reason", std::string(reason))
            .add("var", network_.name(c.variable))
            .add("path", path_text(network_, c.path))
            .add("test", network_.name(c.test))
            .add("dll", c.delta_ll);
        if (c.delta_size) r.add("dsize", static_cast<std::int64_t>(*c.delta_size));
        rejected.push_back(c);
        continue;
      }
      if (!best || c.penalized_score > pool[*best].penalized_score) best = i;
    }
    if (!best) continue;

    const SplitCandidate& c = pool[*best];
    const double score_before = penalized_score();
    BayesianNetwork next = apply_split(network_, c.variable, c.path, c.test, train_);
    try {
      model_.replace_cpt(next, c.variable);
    } catch (const TractabilityBoundError&) {
      record("reject")
          .add("kind", std::string("split"))
          .add("reason", std::string("bound"))
          .add("var", network_.name(c.variable))
          .add("path", path_text(network_, c.path))
          .add("test", network_.name(c.test))
          .add("dll", c.delta_ll);
      rejected.push_back(c);
      continue;
    }
    network_ = std::move(next);
    train_ll_ += c.delta_ll;
    ++committed;
    refresh_candidates(c.variable);
    // Sizes of other candidates depend on the circuit, which just changed.
    rejected.clear();
    record("split")
        .add("var", network_.name(c.variable))
        .add("path", path_text(network_, c.path))
        .add("test", network_.name(c.test))
        .add("dll", c.delta_ll)
        .add("dll_per_example", c.delta_ll_per_example)
        .add("dsize", static_cast<std::int64_t>(*c.delta_size))
        .add("penalized", c.penalized_score)
        .add("ll", train_ll_)
        .add("size", model_.size())
        .add("max_size", config_.max_sdd_size)
        .add("score_before", score_before)
        .add("score", penalized_score());
  }
  return committed;
}

double SearchState::swap_upper_bound(std::size_t i) const {
  const auto& order = network_.ordering();
  if (i + 1 >= order.size()) throw InputError("swap position out of range");
  return pair_bound_[index(order[i]) * network_.size() + index(order[i + 1])];
}

CptTree SearchState::reset_tree(VariableId v) const {
  const std::uint64_t t = train_.column(v).count();
  const SufficientStats s{t, train_.rows() - t};
  return CptTree::single_leaf(s, estimate_leaf_prob(s.count_true, s.count_false, alpha_));
}

bool SearchState::apply_swap(std::size_t i) {
  const auto& order = network_.ordering();
  if (i + 1 >= order.size()) throw InputError("swap position out of range");
  const VariableId a = order[i];
  const VariableId b = order[i + 1];
  const double bound = swap_upper_bound(i);
  if (std::find(tabu_.begin(), tabu_.end(), i) != tabu_.end()) {
    record("reject")
        .add("kind", std::string("swap"))
        .add("reason", std::string("tabu"))
        .add("pos", i)
        .add("a", network_.name(a))
        .add("b", network_.name(b));
    return false;
  }

  std::vector<VariableId> ordering = order;
  std::swap(ordering[i], ordering[i + 1]);
  std::vector<CptTree> cpts = network_.cpts();
  std::vector<VariableId> reset{a, b};
  if (config_.reset_dependents) {
    for (std::size_t v = 0; v < network_.size(); ++v) {
      const CptTree& tree = cpts[v];
      if (variable(v) != a && variable(v) != b &&
          (tree.tests_variable(a) || tree.tests_variable(b))) {
        reset.push_back(variable(v));
      }
    }
  }
  for (VariableId v : reset) cpts[index(v)] = reset_tree(v);
  BayesianNetwork next(network_.names(), std::move(ordering), std::move(cpts), alpha_);
  compiler::CompiledModel compiled = compiler::encode(next, encode_options(config_));

  network_ = std::move(next);
  model_ = std::move(compiled);
  train_ll_ = log_likelihood(network_, train_);
  tabu_.push_back(i);
  while (tabu_.size() > config_.tabu_size) tabu_.pop_front();
  for (VariableId v : reset) refresh_candidates(v);
  record("swap")
      .add("pos", i)
      .add("a", network_.name(a))
      .add("b", network_.name(b))
      .add("bound", bound)
      .add("reset", reset.size())
      .add("ll", train_ll_)
      .add("size", model_.size())
      .add("score", penalized_score());
  return true;
}

bool SearchState::swap_step() {
  const std::size_t v_count = network_.size();
  if (v_count < 2) return false;
  std::vector<std::size_t> positions(v_count - 1);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  std::vector<double> bounds(v_count - 1);
  for (std::size_t i = 0; i + 1 < v_count; ++i) bounds[i] = swap_upper_bound(i);
  std::stable_sort(positions.begin(), positions.end(),
                   [&](std::size_t x, std::size_t y) { return bounds[x] > bounds[y]; });
  for (std::size_t i : positions) {
    if (std::find(tabu_.begin(), tabu_.end(), i) != tabu_.end()) continue;
    try {
      if (apply_swap(i)) return true;
    } catch (const TractabilityBoundError& e) {
      record("reject")
          .add("kind", std::string("swap"))
          .add("reason", std::string("bound"))
          .add("pos", i)
          .add("size", e.partial_size());
    }
  }
  return false;
}

}  // namespace tbn::learn
