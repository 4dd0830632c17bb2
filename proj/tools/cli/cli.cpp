#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "tbn/compiler/encoder.hpp"
#include "tbn/compiler/model_io.hpp"
#include "tbn/data/cohort.hpp"
#include "tbn/data/csv.hpp"
#include "tbn/data/metadata.hpp"
#include "tbn/data/network_io.hpp"
#include "tbn/data/split.hpp"
#include "tbn/data/synthetic.hpp"
#include "tbn/errors.hpp"
#include "tbn/learn/config.hpp"
#include "tbn/learn/learner.hpp"
#include "tbn/model/likelihood.hpp"
#include "tbn/query/query.hpp"
#include "tbn/query/report.hpp"

namespace tbn::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kReportLayout =
    "TSV report columns: section, row, K, L (groups absent from the metadata are omitted).\n"
    "  odds       <drug>        P(increase | drug) / P(increase) per group\n"
    "  baseline   P(increase)   P(#T2 diseases > #T1 diseases) per group\n"
    "  increment  k=1..k_max    P(exactly k more | increase) per group\n"
    "Undefined cells print NA.";

struct LearnFlag {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr LearnFlag kLearnFlags[] = {
    {"--alpha-grid", "alpha_grid", "Comma-separated Dirichlet alphas for the final refit"},
    {"--min-split-gain", "min_split_gain_per_example", "Minimum log-likelihood gain per example"},
    {"--max-sdd-size", "max_sdd_size", "Maximum compiled size in elements"},
    {"--split-time-limit", "split_phase_time_limit_seconds", "Seconds per tree-growth phase"},
    {"--tabu-size", "tabu_size", "Tabu list capacity"},
    {"--restarts", "restarts", "Number of restarts"},
    {"--time-budget", "total_time_budget_seconds", "Total search time in seconds"},
    {"--kappa", "size_penalty_kappa", "Size penalty per element"},
    {"--beam", "swap_candidate_beam", "Split candidates trial-compiled per step"},
    {"--seed", "rng_seed", "Random seed"},
    {"--max-swaps", "max_swaps_per_restart", "Swap moves per restart (0: time only)"},
    {"--jobs", "jobs", "Restarts run in parallel"},
    {"--spare-slots", "spare_parameter_slots", "Reserved parameter slots per variable"},
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::string fixed(double x, const char* format = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

std::optional<fs::path> sidecar_if_present(const fs::path& csv) {
  const fs::path p = data::default_metadata_path(csv);
  if (fs::exists(p)) return p;
  return std::nullopt;
}

void write_with_meta(const fs::path& csv, const Dataset& data,
                     const std::optional<std::vector<data::VariableMeta>>& meta) {
  data::save_csv(csv, data);
  if (meta) data::save_metadata(data::default_metadata_path(csv), *meta);
}

struct ModelDir {
  BayesianNetwork network;
  compiler::CompiledModel model;
};

ModelDir load_model_dir(const fs::path& dir) {
  BayesianNetwork bn = data::load_network(dir / "network.bn");
  compiler::CompiledModel model =
      compiler::load_compiled(compiler::ModelFiles::in_directory(dir), bn);
  return {std::move(bn), std::move(model)};
}

void save_model_dir(const fs::path& dir, const compiler::CompiledModel& model) {
  ensure_dir(dir);
  data::save_network(dir / "network.bn", model.network());
  compiler::save_compiled(model, compiler::ModelFiles::in_directory(dir));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tractable Bayesian networks: learn, compile to SDDs and query"};
  app.name("tbn");
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Sample a synthetic dataset from a ground-truth network");
  std::string gen_spec;
  bool gen_cohort = false;
  std::optional<std::size_t> gen_samples;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_meta;
  std::string gen_out;
  bool gen_no_split = false;
  std::uint64_t gen_split_seed = 0;
  auto* spec_opt = gen->add_option("--spec", gen_spec, "Synthetic spec file (network + prevalences)");
  auto* cohort_opt = gen->add_flag("--cohort", gen_cohort,
                                   "Use the built-in 20-variable drug/disease cohort");
  spec_opt->excludes(cohort_opt);
  gen->add_option("--samples", gen_samples, "Rows to sample (overrides the spec file)");
  gen->add_option("--seed", gen_seed, "Sampling seed (overrides the spec file)");
  gen->add_option("--meta", gen_meta, "Metadata sidecar to copy next to the data");
  gen->add_option("--out-dir", gen_out, "Output directory")->required();
  gen->add_flag("--no-split", gen_no_split, "Do not write train/valid/test files");
  gen->add_option("--split-seed", gen_split_seed, "Seed of the 0.75/0.10/0.15 split");

  // learn
  auto* learn = app.add_subcommand("learn", "Learn a tractable network and compile it");
  std::string learn_train, learn_valid, learn_meta, learn_out, learn_config;
  bool learn_desk = false;
  bool learn_reset_dependents = false;
  learn->add_option("--train", learn_train, "Training CSV")->required();
  learn->add_option("--valid", learn_valid, "Validation CSV")->required();
  learn->add_option("--meta", learn_meta, "Metadata sidecar (default <train>.meta when present)");
  learn->add_option("--out-dir", learn_out, "Output directory")->required();
  learn->add_option("--config", learn_config, "key = value configuration file");
  learn->add_flag("--desk-scale", learn_desk,
                  "Preset: 5 restarts, 300 s, max size 200,000, 40 swaps per restart");
  learn->add_flag("--reset-dependents", learn_reset_dependents,
                  "On a swap also reset trees that test a swapped variable");
  std::map<std::string, std::string> learn_values;
  std::map<std::string, CLI::Option*> learn_options;
  for (const LearnFlag& f : kLearnFlags) {
    learn_options[f.key] = learn->add_option(f.flag, learn_values[f.key], f.help);
  }

  // compile
  auto* compile = app.add_subcommand("compile", "Compile a network file to an SDD");
  std::string compile_network, compile_out;
  std::size_t compile_max = std::numeric_limits<std::size_t>::max();
  compile->add_option("--network", compile_network, "Network file")->required();
  compile->add_option("--out-dir", compile_out, "Output directory")->required();
  compile->add_option("--max-sdd-size", compile_max, "Abort beyond this many elements");

  // query
  auto* query = app.add_subcommand("query", "Probability or count-group query on a compiled model");
  std::string query_dir, query_target, query_evidence, query_group, query_meta;
  std::size_t query_kmax = 4;
  query->add_option("--model-dir", query_dir, "Directory written by learn or compile")->required();
  query->add_option("--target", query_target, "Target assignment, e.g. Y=1,Z=0");
  query->add_option("--evidence", query_evidence, "Conditioning assignment");
  auto* group_opt = query->add_option("--count-group", query_group,
                                      "Disease group (K or L): P(more diseases in T2 than T1)");
  query->add_option("--meta", query_meta, "Metadata sidecar (default <model-dir>/model.meta)");
  query->add_option("--k-max", query_kmax, "Largest increment reported")->check(CLI::PositiveNumber);
  auto* target_opt = query->get_option("--target");
  group_opt->excludes(target_opt);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Odds and increment tables per drug and group");
  analyze->footer(kReportLayout);
  std::string analyze_dir, analyze_network, analyze_meta, analyze_tsv, analyze_format = "text";
  std::size_t analyze_kmax = 4;
  auto* dir_opt = analyze->add_option("--model-dir", analyze_dir, "Directory written by learn or compile");
  auto* net_opt = analyze->add_option("--network", analyze_network,
                                      "Analyze a network exactly by enumeration (at most 20 variables)");
  dir_opt->excludes(net_opt);
  analyze->add_option("--meta", analyze_meta, "Metadata sidecar (default <model-dir>/model.meta)");
  analyze->add_option("--k-max", analyze_kmax, "Largest increment reported")->check(CLI::PositiveNumber);
  analyze->add_option("--tsv", analyze_tsv, "Also write the TSV report to this file");
  analyze->add_option("--format", analyze_format, "Standard output format")
      ->check(CLI::IsMember({"text", "tsv"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      if (gen_spec.empty() && !gen_cohort) throw ConfigError("gen needs --spec or --cohort");
      data::SyntheticSpec spec;
      std::optional<std::vector<data::VariableMeta>> meta;
      if (gen_cohort) {
        data::Cohort cohort = data::cohort_spec(100'000, 0);
        spec = std::move(cohort.spec);
        meta = std::move(cohort.meta);
      } else {
        spec = data::load_spec(gen_spec);
      }
      if (gen_samples) spec.samples = *gen_samples;
      if (gen_seed) spec.seed = *gen_seed;
      if (!gen_meta.empty()) meta = data::load_metadata(gen_meta);
      const BayesianNetwork truth = spec.effective_network();
      if (meta) meta = data::align_metadata(truth.names(), std::move(*meta));
      const Dataset sampled = data::generate(spec);

      const fs::path dir = gen_out;
      ensure_dir(dir);
      write_with_meta(dir / "data.csv", sampled, meta);
      data::save_network(dir / "truth.bn", truth);
      data::save_spec(dir / "spec.txt", spec);
      if (!gen_no_split) {
        const data::DataSplit parts = data::split_dataset(sampled, {}, gen_split_seed);
        write_with_meta(dir / "train.csv", parts.train, meta);
        write_with_meta(dir / "valid.csv", parts.valid, meta);
        write_with_meta(dir / "test.csv", parts.test, meta);
        out << "rows " << sampled.rows() << " train " << parts.train.rows() << " valid "
            << parts.valid.rows() << " test " << parts.test.rows() << '\n';
      } else {
        out << "rows " << sampled.rows() << '\n';
      }
      return kOk;
    }

    if (learn->parsed()) {
      learn::LearnConfig config = learn_desk ? learn::LearnConfig::desk_scale() : learn::LearnConfig{};
      if (!learn_config.empty()) learn::load_config(learn_config, config);
      for (const LearnFlag& f : kLearnFlags) {
        if (learn_options[f.key]->count() > 0) learn::apply_setting(config, f.key, learn_values[f.key]);
      }
      if (learn_reset_dependents) config.reset_dependents = true;
      config.validate();

      const Dataset train = data::load_csv(learn_train);
      const Dataset valid = data::load_csv(learn_valid);
      std::optional<std::vector<data::VariableMeta>> meta;
      if (!learn_meta.empty()) {
        meta = data::align_metadata(train.names(), data::load_metadata(learn_meta));
      } else if (auto p = sidecar_if_present(learn_train)) {
        meta = data::align_metadata(train.names(), data::load_metadata(*p));
      }

      const learn::LearnResult result = learn::learn(train, valid, config);
      const fs::path dir = learn_out;
      save_model_dir(dir, result.model);
      result.trace.save(dir / "trace.txt");
      {
        std::ofstream cfg(dir / "config.txt");
        learn::write_config(cfg, config);
      }
      if (meta) data::save_metadata(dir / "model.meta", *meta);
      out << "alpha " << fixed(result.alpha) << '\n'
          << "valid_ll " << fixed(result.valid_ll) << '\n'
          << "edges " << result.network.edge_count() << '\n'
          << "leaves " << result.network.leaf_count() << '\n'
          << "sdd_size " << result.model.size() << '\n'
          << "trace_records " << result.trace.records.size() << '\n';
      return kOk;
    }

    if (compile->parsed()) {
      const BayesianNetwork bn = data::load_network(compile_network);
      const compiler::CompiledModel model = compiler::encode(bn, {0, compile_max});
      save_model_dir(compile_out, model);
      out << "sdd_size " << model.size() << '\n';
      return kOk;
    }

    if (query->parsed()) {
      const ModelDir m = load_model_dir(query_dir);
      const query::Evidence given = query::parse_evidence(query_evidence, m.network);
      if (group_opt->count() > 0) {
        const auto group = data::parse_group(query_group);
        if (!group || *group == data::Group::None) {
          throw ConfigError("--count-group must be K or L");
        }
        const fs::path meta_path =
            query_meta.empty() ? fs::path(query_dir) / "model.meta" : fs::path(query_meta);
        const auto meta = data::align_metadata(m.network.names(), data::load_metadata(meta_path));
        const query::GroupSpec spec = query::make_group(meta, *group);
        if (spec.t1.empty()) throw SchemaError("group has no paired diseases");
        const auto diff = query::count_difference(m.model, spec, given);
        out << "group " << data::to_string(*group) << '\n'
            << "p_increase " << fixed(query::increase_share(diff)) << '\n';
        const query::IncrementDistribution inc = query::increments_from(diff, query_kmax);
        for (std::size_t k = 1; k <= query_kmax; ++k) {
          out << "p_k " << k << ' ' << fixed(inc.p[k - 1]) << '\n';
        }
        return kOk;
      }
      const query::Evidence target = query::parse_evidence(query_target, m.network);
      out << "probability " << fixed(query::probability(m.model, target, given)) << '\n';
      return kOk;
    }

    if (analyze->parsed()) {
      if (analyze_dir.empty() && analyze_network.empty()) {
        throw ConfigError("analyze needs --model-dir or --network");
      }
      query::QueryReport report;
      if (!analyze_dir.empty()) {
        const ModelDir m = load_model_dir(analyze_dir);
        const fs::path meta_path =
            analyze_meta.empty() ? fs::path(analyze_dir) / "model.meta" : fs::path(analyze_meta);
        const auto meta = data::align_metadata(m.network.names(), data::load_metadata(meta_path));
        report = query::analyze(m.model, meta, analyze_kmax);
      } else {
        if (analyze_meta.empty()) throw ConfigError("--network needs --meta");
        const BayesianNetwork bn = data::load_network(analyze_network);
        const auto meta = data::align_metadata(bn.names(), data::load_metadata(analyze_meta));
        report = query::analyze_exact(bn, meta, analyze_kmax);
      }
      if (!analyze_tsv.empty()) {
        std::ofstream tsv(analyze_tsv);
        if (!tsv) throw InputError("cannot open '" + analyze_tsv + "' for writing");
        query::write_report_tsv(tsv, report);
      }
      if (analyze_format == "tsv") {
        query::write_report_tsv(out, report);
      } else {
        query::write_report_text(out, report);
      }
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "tbn: " << e.what() << '\n';
    return kUsage;
  } catch (const TractabilityBoundError& e) {
    err << "tbn: " << e.what() << '\n';
    return kTractability;
  } catch (const ParseError& e) {
    err << "tbn: " << e.what() << '\n';
    return kDataError;
  } catch (const SchemaError& e) {
    err << "tbn: " << e.what() << '\n';
    return kDataError;
  } catch (const InputError& e) {
    err << "tbn: " << e.what() << '\n';
    return kDataError;
  } catch (const LookupError& e) {
    err << "tbn: " << e.what() << '\n';
    return kDataError;
  } catch (const UndefinedConditionalError& e) {
    err << "tbn: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "tbn: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace tbn::cli
