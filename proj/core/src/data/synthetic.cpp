#include "tbn/data/synthetic.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tbn/data/network_io.hpp"
#include "tbn/errors.hpp"
#include "tbn/random.hpp"

namespace tbn::data {

BayesianNetwork SyntheticSpec::effective_network() const {
  BayesianNetwork bn = network;
  for (const auto& [name, p] : prevalence) {
    VariableId v{};
    bool found = false;
    for (std::size_t i = 0; i < bn.size(); ++i) {
      if (bn.names()[i] == name) {
        v = variable(i);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("prevalence for unknown variable '" + name + "'");
    if (!(p > 0.0 && p < 1.0)) {
      throw ConfigError("prevalence of '" + name + "' must lie strictly inside (0,1)");
    }
    const CptTree& tree = bn.cpt(v);
    if (!tree.root().is_leaf()) {
      throw ConfigError("prevalence given for '" + name + "', which has parents");
    }
    bn = bn.with_cpt(v, CptTree::single_leaf(tree.root().counts, p));
  }
  return bn;
}

void write_spec(std::ostream& out, const SyntheticSpec& spec) {
  write_network(out, spec.network);
  for (const auto& [name, p] : spec.prevalence) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    out << "prevalence " << name << ' ' << buf << '\n';
  }
  out << "samples " << spec.samples << '\n';
  out << "seed " << spec.seed << '\n';
}

SyntheticSpec read_spec(std::istream& in) {
  SyntheticSpec spec;
  // Spec-only lines are blanked so network parse errors keep their line numbers.
  std::ostringstream network_text;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream f(line);
    std::string tag;
    f >> tag;
    if (tag == "prevalence") {
      std::string name;
      double p = 0.0;
      if (!(f >> name >> p)) throw ParseError("expected 'prevalence <name> <p>'", line_no);
      spec.prevalence[name] = p;
      network_text << '\n';
    } else if (tag == "samples") {
      if (!(f >> spec.samples)) throw ParseError("expected 'samples <n>'", line_no);
      network_text << '\n';
    } else if (tag == "seed") {
      if (!(f >> spec.seed)) throw ParseError("expected 'seed <s>'", line_no);
      network_text << '\n';
    } else {
      network_text << line << '\n';
    }
  }
  std::istringstream net(network_text.str());
  spec.network = read_network(net);
  spec.effective_network();  // validates prevalences
  return spec;
}

SyntheticSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
  return read_spec(in);
}

void save_spec(const std::filesystem::path& path, const SyntheticSpec& spec) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  write_spec(out, spec);
}

Dataset sample(const BayesianNetwork& bn, std::size_t rows, std::uint64_t seed) {
  DatasetBuilder builder(bn.names(), rows);
  std::vector<std::uint8_t> row(bn.size(), 0);
  Rng rng(seed);
  auto value_of = [&row](VariableId v) { return row[index(v)] != 0; };
  for (std::size_t r = 0; r < rows; ++r) {
    for (VariableId v : bn.ordering()) {
      const bool x = rng.uniform() < bn.prob_true(v, value_of);
      row[index(v)] = x;
      if (x) builder.set(r, v, true);
    }
  }
  return std::move(builder).build();
}

Dataset generate(const SyntheticSpec& spec) {
  return sample(spec.effective_network(), spec.samples, spec.seed);
}

}  // namespace tbn::data
