// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "fixtures.hpp"
#include "tbn/compiler/encoder.hpp"
#include "tbn/data/cohort.hpp"
#include "tbn/data/metadata.hpp"
#include "tbn/data/network_io.hpp"
#include "tbn/data/split.hpp"
#include "tbn/data/synthetic.hpp"
#include "tbn/learn/learner.hpp"
#include "tbn/model/likelihood.hpp"
#include "tbn/query/oracle.hpp"
#include "tbn/query/query.hpp"
#include "tbn/query/report.hpp"
#include "tbn/sdd/wmc.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tbn;
using query::Evidence;
using query::GroupSpec;

struct Outcome {
  bool pass = true;
  std::string detail;
  // Traces and reports, compared byte for byte by the determinism check.
  std::string fingerprint;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::path(TBN_TEST_TMPDIR) / "acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string trace_text(const learn::LearnTrace& t) {
  std::ostringstream out;
  t.write(out);
  return out.str();
}

// 1. Model counts of random CNFs against truth tables, plus decision-node
// invariants on every compiled circuit.
Outcome sdd_validity() {
  Outcome o;
  Rng rng(1001);
  int mismatches = 0;
  int violations = 0;
  std::string first;
  for (int i = 0; i < 200; ++i) {
    const auto vars = static_cast<std::uint32_t>(1 + rng.below(12));
    const std::size_t clauses = 1 + rng.below(3 * vars);
    const testing::Cnf cnf = testing::random_cnf(rng, vars, clauses, 1 + rng.below(3));
    sdd::SddManager m(i % 2 == 0 ? testing::linear_vtree(vars) : testing::shuffled_vtree(rng, vars));
    const sdd::Sdd root = testing::compile_cnf(m, cnf);
    if (sdd::model_count(m, root) != testing::truth_table_count(cnf)) ++mismatches;
    if (const std::string v = testing::decision_node_violation(m, root); !v.empty()) {
      ++violations;
      if (first.empty()) first = " first: " + v;
    }
  }
  o.pass = mismatches == 0 && violations == 0;
  o.detail = format("200 CNFs, %d count mismatches, %d invariant violations", mismatches, violations) + first;
  return o;
}

struct TestModel {
  BayesianNetwork bn;
  compiler::CompiledModel model;
  query::JointTable joint;
};

std::vector<TestModel>& test_models() {
  static std::vector<TestModel> models = [] {
    std::vector<TestModel> out;
    Rng rng(2002);
    for (int i = 0; i < 100; ++i) {
      const std::size_t vars = 3 + rng.below(13);
      BayesianNetwork bn = testing::random_network(rng, vars, 3);
      compiler::CompiledModel model = compiler::encode(bn, {.spare_parameter_slots = rng.below(3)});
      query::JointTable joint = query::brute_force_joint(bn);
      out.push_back({std::move(bn), std::move(model), std::move(joint)});
    }
    return out;
  }();
  return models;
}

// 2. Every compiled network normalizes.
Outcome normalization() {
  Outcome o;
  double worst = 0.0;
  for (const TestModel& t : test_models()) {
    const double z = sdd::wmc(t.model.manager(), t.model.root(), t.model.encoding().weights());
    worst = std::max(worst, std::abs(z - 1.0));
  }
  o.pass = worst <= 1e-9;
  o.detail = format("100 networks, max |wmc - 1| = %.3g", worst);
  return o;
}

Evidence random_evidence(Rng& rng, const std::vector<std::size_t>& pool, std::size_t count) {
  Evidence e;
  for (std::size_t i = 0; i < std::min(count, pool.size()); ++i) {
    e.emplace_back(variable(pool[i]), rng.bernoulli(0.5));
  }
  return e;
}

struct QueryCase {
  GroupSpec spec;
  VariableId drug{};
  Evidence given;
};

// A group of 1-4 disjoint pairs, a drug outside it, and evidence on up to
// two of the remaining variables.
QueryCase random_case(Rng& rng, std::size_t vars) {
  std::vector<std::size_t> ids(vars);
  for (std::size_t i = 0; i < vars; ++i) ids[i] = i;
  rng.shuffle(ids);
  QueryCase q;
  q.spec.group = data::Group::K;
  const std::size_t pairs = 1 + rng.below(std::min<std::size_t>((vars - 1) / 2, 4));
  for (std::size_t i = 0; i < pairs; ++i) {
    q.spec.t1.push_back(variable(ids[2 * i]));
    q.spec.t2.push_back(variable(ids[2 * i + 1]));
  }
  q.drug = variable(ids[2 * pairs]);
  const std::vector<std::size_t> rest(ids.begin() + static_cast<long>(2 * pairs + 1), ids.end());
  q.given = random_evidence(rng, rest, rng.below(3));
  return q;
}

// 3. Circuit queries against the enumerated joint distribution.
Outcome oracle_equivalence() {
  Outcome o;
  Rng rng(3003);
  double worst_p = 0.0;
  double worst_inc = 0.0;
  double worst_odds = 0.0;
  double worst_k = 0.0;
  for (const TestModel& t : test_models()) {
    const std::size_t vars = t.bn.size();
    for (int q = 0; q < 3; ++q) {
      std::vector<std::size_t> ids(vars);
      for (std::size_t i = 0; i < vars; ++i) ids[i] = i;
      rng.shuffle(ids);
      const std::size_t nt = 1 + rng.below(std::min<std::size_t>(3, vars - 1));
      const std::vector<std::size_t> tpool(ids.begin(), ids.begin() + static_cast<long>(nt));
      const std::vector<std::size_t> gpool(ids.begin() + static_cast<long>(nt), ids.end());
      const Evidence target = random_evidence(rng, tpool, nt);
      const Evidence given = random_evidence(rng, gpool, rng.below(4));
      worst_p = std::max(worst_p, std::abs(query::probability(t.model, target, given) -
                                           query::oracle_probability(t.joint, target, given)));

      const QueryCase c = random_case(rng, vars);
      worst_inc = std::max(worst_inc, std::abs(query::count_increase_prob(t.model, c.spec, c.given) -
                                               query::oracle_count_increase_prob(t.joint, c.spec, c.given)));
      worst_odds = std::max(worst_odds, std::abs(query::increase_odds(t.model, c.spec, c.drug) -
                                                 query::oracle_increase_odds(t.joint, c.spec, c.drug)));
      const auto a = query::increment_distribution(t.model, c.spec, 4);
      const auto b = query::oracle_increment_distribution(t.joint, c.spec, 4);
      for (std::size_t k = 0; k < 4; ++k) worst_k = std::max(worst_k, std::abs(a.p[k] - b.p[k]));
    }
  }
  const double worst = std::max({worst_p, worst_inc, worst_odds, worst_k});
  o.pass = worst <= 1e-9;
  o.detail = format(
      "300 queries per kind; max abs error probability %.3g, increase %.3g, odds %.3g, increments %.3g",
      worst_p, worst_inc, worst_odds, worst_k);
  return o;
}

// 4. Generating-function output is a sub-distribution consistent with wmc.
Outcome gf_coherence() {
  Outcome o;
  Rng rng(4004);
  int negative = 0;
  double worst_sum = 0.0;
  double worst_norm = 0.0;
  for (const TestModel& t : test_models()) {
    for (int q = 0; q < 3; ++q) {
      const QueryCase c = random_case(rng, t.bn.size());
      const auto poly = query::count_difference(t.model, c.spec, c.given);
      for (const auto& [d, p] : poly.terms()) negative += p < 0.0;
      const double z = sdd::wmc(t.model.manager(), t.model.root(),
                                compiler::condition_on_evidence(t.model, c.given));
      worst_sum = std::max(worst_sum, std::abs(poly.sum() - z));
      const auto inc = query::increment_distribution(t.model, c.spec, 4);
      double total = 0.0;
      for (const auto& [k, p] : inc.full) total += p;
      worst_norm = std::max(worst_norm, std::abs(total - 1.0));
    }
  }
  o.pass = negative == 0 && worst_sum <= 1e-9 && worst_norm <= 1e-9;
  o.detail = format("300 polynomials, %d negative coefficients, max |sum - wmc| %.3g, max |sum p_k - 1| %.3g",
                    negative, worst_sum, worst_norm);
  return o;
}

// 5. Trace audit of seeded desk-scale runs on cohort-sized data. Smaller
// samples let spurious splits clear the per-example gain threshold and the
// restarts then end on the clock instead of the swap budget.
Outcome learner_audit() {
  Outcome o;
  int failures = 0;
  std::size_t splits = 0;
  std::size_t sized = 0;
  std::string first;
  auto fail = [&](int run, const std::string& why) {
    ++failures;
    if (first.empty()) first = format(" first: run %d ", run) + why;
  };
  for (int run = 1; run <= 10; ++run) {
    const data::Cohort cohort = data::cohort_spec(100000, 500 + static_cast<std::uint64_t>(run));
    const Dataset d = data::generate(cohort.spec);
    const data::DataSplit parts = data::split_dataset(d, {}, static_cast<std::uint64_t>(run));
    learn::LearnConfig config = learn::LearnConfig::desk_scale();
    config.rng_seed = static_cast<std::uint64_t>(run);
    const learn::LearnResult r = learn::learn(parts.train, parts.valid, config);
    o.fingerprint += trace_text(r.trace);

    double best_snapshot = -INFINITY;
    const learn::TraceRecord* select = nullptr;
    for (const auto& rec : r.trace.records) {
      if (rec.get("size")) {
        ++sized;
        if (rec.number("size") > static_cast<double>(config.max_sdd_size)) fail(run, rec.event + " over size bound");
      }
      if (rec.event == "split") {
        ++splits;
        if (!(rec.number("score") > rec.number("score_before"))) fail(run, "split without score increase");
      }
      if (rec.event == "snapshot") best_snapshot = std::max(best_snapshot, rec.number("valid_ll"));
      if (rec.event == "select") select = &rec;
    }
    if (!select) {
      fail(run, "no select record");
      continue;
    }
    if (select->number("valid_ll") != best_snapshot || r.snapshot_valid_ll != best_snapshot) {
      fail(run, "selected snapshot is not the validation maximum");
    }
    if (r.valid_ll < best_snapshot - 1e-9 ||
        std::abs(log_likelihood(r.network, parts.valid) - r.valid_ll) > 1e-6) {
      fail(run, "returned model does not reach the best snapshot's validation LL");
    }
    if (r.model.size() > config.max_sdd_size) fail(run, "returned model over size bound");
  }
  o.pass = failures == 0;
  o.detail = format("10 runs, %zu splits, %zu sized records, %d violations", splits, sized, failures) + first;
  return o;
}

// A -> B, A -> C, B -> D, C -> E; every dependency moves P by at least 0.7.
BayesianNetwork five_variable_tree() {
  using testing::leaf_tree;
  using testing::split_tree;
  return BayesianNetwork({"A", "B", "C", "D", "E"},
                         {variable(0), variable(1), variable(2), variable(3), variable(4)},
                         {leaf_tree(0.5), split_tree(variable(0), 0.9, 0.1),
                          split_tree(variable(0), 0.1, 0.85), split_tree(variable(1), 0.85, 0.1),
                          split_tree(variable(2), 0.9, 0.15)},
                         1.0);
}

std::set<std::pair<std::size_t, std::size_t>> skeleton(const BayesianNetwork& bn) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 0; v < bn.size(); ++v) {
    for (VariableId p : bn.parents(variable(v))) {
      edges.emplace(std::min(v, index(p)), std::max(v, index(p)));
    }
  }
  return edges;
}

// 6. Skeleton recovery over 10 seeds.
Outcome structure_recovery() {
  Outcome o;
  const BayesianNetwork truth = five_variable_tree();
  const auto expected = skeleton(truth);
  int recovered = 0;
  int supersets = 0;
  std::string misses;
  for (int seed = 1; seed <= 10; ++seed) {
    const Dataset d = data::sample(truth, 20000, 600 + static_cast<std::uint64_t>(seed));
    const data::DataSplit parts = data::split_dataset(d, {}, static_cast<std::uint64_t>(seed));
    learn::LearnConfig config = learn::LearnConfig::desk_scale();
    config.rng_seed = static_cast<std::uint64_t>(seed);
    const learn::LearnResult r = learn::learn(parts.train, parts.valid, config);
    o.fingerprint += trace_text(r.trace);
    const auto got = skeleton(r.network);
    supersets += std::includes(got.begin(), got.end(), expected.begin(), expected.end());
    if (got == expected) {
      ++recovered;
    } else {
      misses += format(" seed %d: %zu edges", seed, got.size());
    }
  }
  o.pass = recovered >= 9;
  o.detail = format("true skeleton in %d of 10 seeds (need 9), true edges all present in %d", recovered,
                    supersets) +
             (misses.empty() ? "" : ";" + misses);
  return o;
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
  std::ostringstream o;
  std::ostringstream e;
  const int code = tbn::cli::run(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::fprintf(stderr, "tbn %s: %s", args.front().c_str(), e.str().c_str());
  return code;
}

std::vector<std::vector<std::string>> tsv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, '\t')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// 7. gen -> learn -> analyze on the synthetic cohort, compared with the exact
// report of the generating network.
Outcome pipeline(const std::string& name) {
  Outcome o;
  const fs::path dir = scratch(name);
  const std::string data_dir = (dir / "data").string();
  const std::string model_dir = (dir / "model").string();
  const std::string tsv = (dir / "report.tsv").string();
  std::string learn_out;
  if (cli({"gen", "--cohort", "--samples", "100000", "--seed", "7", "--out-dir", data_dir}) != 0 ||
      cli({"learn", "--train", data_dir + "/train.csv", "--valid", data_dir + "/valid.csv", "--desk-scale",
           "--seed", "1", "--out-dir", model_dir},
          &learn_out) != 0 ||
      cli({"analyze", "--model-dir", model_dir, "--tsv", tsv}) != 0) {
    o.pass = false;
    o.detail = "pipeline command failed";
    return o;
  }
  const std::string report = slurp(tsv);
  o.fingerprint = learn_out + slurp(fs::path(model_dir) / "trace.txt") +
                  slurp(fs::path(model_dir) / "network.bn") + report;

  const BayesianNetwork truth = data::load_network(data_dir + "/truth.bn");
  const auto meta = data::align_metadata(truth.names(), data::load_metadata(data_dir + "/data.csv.meta"));
  const query::QueryReport exact = query::analyze_exact(truth, meta, 4);

  std::vector<std::string> drugs;
  for (const auto& m : meta) {
    if (m.kind == data::VarKind::Drug) drugs.push_back(m.name);
  }
  const auto rows = tsv_rows(report);
  std::vector<std::vector<std::string>> layout;
  layout.push_back({"section", "row", "K", "L"});
  for (const auto& d : drugs) layout.push_back({"odds", d});
  layout.push_back({"baseline", "P(increase)"});
  for (int k = 1; k <= 4; ++k) layout.push_back({"increment", "k=" + std::to_string(k)});
  bool shape = rows.size() == layout.size() && truth.size() == 20 && drugs.size() == 4;
  for (std::size_t i = 0; shape && i < rows.size(); ++i) {
    shape = rows[i].size() == 4 && std::equal(layout[i].begin(), layout[i].end(), rows[i].begin());
  }
  if (!shape) {
    o.pass = false;
    o.detail = "report layout differs from drugs x {K, L} plus baseline and k=1..4";
    return o;
  }

  auto number = [](const std::string& cell) { return cell == "NA" ? NAN : std::stod(cell); };
  double worst_odds = 0.0;
  double worst_base = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t d = 0; d < drugs.size(); ++d) {
      const auto& want = exact.rows[d].odds[c];
      const double got = number(rows[1 + d][2 + c]);
      worst_odds = std::max(worst_odds, want && !std::isnan(got) ? std::abs(got - *want) : INFINITY);
    }
    const auto& want = exact.columns[c].baseline;
    const double got = number(rows[1 + drugs.size()][2 + c]);
    worst_base = std::max(worst_base, want && !std::isnan(got) ? std::abs(got - *want) : INFINITY);
  }
  o.pass = worst_odds <= 0.05 && worst_base <= 0.02;
  o.detail = format("layout ok; max |odds - exact| %.4f (limit 0.05), max |baseline - exact| %.4f (limit 0.02)",
                    worst_odds, worst_base);
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&all](int id, const char* name, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
    return o;
  };

  report(1, "sdd-validity", sdd_validity);
  report(2, "normalization", normalization);
  report(3, "oracle-equivalence", oracle_equivalence);
  report(4, "gf-coherence", gf_coherence);
  const Outcome c5 = report(5, "learner-audit", learner_audit);
  const Outcome c6 = report(6, "structure-recovery", structure_recovery);
  const Outcome c7 = report(7, "pipeline", [] { return pipeline("pipeline_a"); });
  report(8, "determinism", [&] {
    Outcome o;
    const bool same5 = learner_audit().fingerprint == c5.fingerprint;
    const bool same6 = structure_recovery().fingerprint == c6.fingerprint;
    const bool same7 = pipeline("pipeline_b").fingerprint == c7.fingerprint;
    o.pass = same5 && same6 && same7 && !c5.fingerprint.empty() && !c7.fingerprint.empty();
    o.detail = format("rerun identical: audit traces %s, recovery traces %s, pipeline trace+report %s",
                      same5 ? "yes" : "no", same6 ? "yes" : "no", same7 ? "yes" : "no");
    return o;
  });
  return all ? 0 : 1;
}
