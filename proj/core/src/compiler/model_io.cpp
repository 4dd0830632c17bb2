#include "tbn/compiler/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "tbn/errors.hpp"
#include "tbn/sdd/io.hpp"

namespace tbn::compiler {

namespace {

std::string exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open '" + p.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw InputError("cannot open '" + p.string() + "' for writing");
  return out;
}

}  // namespace

void save_encoding_map(std::ostream& out, const CompiledModel& model) {
  const EncodingMap& enc = model.encoding();
  const auto& w = enc.weights();
  out << "c map: ind <bn-var> <circuit-var> | par <bn-var> <leaf> <circuit-var> <w-pos> <w-neg>"
         " | spare <bn-var> <circuit-var>\n";
  for (VariableId v : model.network().ordering()) {
    out << "ind " << index(v) << ' ' << sdd::number(enc.indicator(v)) << '\n';
    for (std::size_t i = 0; i < enc.slot_count(v); ++i) {
      const sdd::CircuitVar c = enc.slot(v, i);
      if (i < enc.leaf_count(v)) {
        out << "par " << index(v) << ' ' << i << ' ' << sdd::number(c) << ' ' << exact(w.pos(c))
            << ' ' << exact(w.neg(c)) << '\n';
      } else {
        out << "spare " << index(v) << ' ' << sdd::number(c) << '\n';
      }
    }
  }
}

EncodingMap load_encoding_map(std::istream& in, const BayesianNetwork& network) {
  const std::size_t n = network.size();
  std::vector<std::int64_t> indicators(n, -1);
  std::vector<std::map<std::size_t, std::uint32_t>> params(n);
  std::vector<std::vector<std::uint32_t>> spares(n);
  std::map<std::uint32_t, std::pair<double, double>> weights;
  std::uint32_t max_var = 0;

  std::string line;
  std::size_t line_no = 0;
  auto bn_var = [&](std::istringstream& f) {
    std::int64_t v = -1;
    if (!(f >> v) || v < 0 || static_cast<std::size_t>(v) >= n) {
      throw ParseError("bad network variable", line_no);
    }
    return static_cast<std::size_t>(v);
  };
  auto circuit = [&](std::istringstream& f) {
    std::int64_t c = 0;
    if (!(f >> c) || c <= 0) throw ParseError("bad circuit variable", line_no);
    const auto cv = static_cast<std::uint32_t>(c);
    if (weights.contains(cv)) throw ParseError("circuit variable mapped twice", line_no);
    max_var = std::max(max_var, cv);
    return cv;
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream f(line);
    std::string tag;
    if (!(f >> tag) || tag == "c") continue;
    if (tag == "ind") {
      const std::size_t v = bn_var(f);
      if (indicators[v] >= 0) throw ParseError("indicator mapped twice", line_no);
      const std::uint32_t c = circuit(f);
      indicators[v] = c;
      weights[c] = {1.0, 1.0};
    } else if (tag == "par") {
      const std::size_t v = bn_var(f);
      std::size_t leaf = 0;
      if (!(f >> leaf)) throw ParseError("bad leaf index", line_no);
      const std::uint32_t c = circuit(f);
      double pos = 0.0;
      double neg = 0.0;
      if (!(f >> pos >> neg)) throw ParseError("bad parameter weights", line_no);
      if (!params[v].emplace(leaf, c).second) throw ParseError("leaf mapped twice", line_no);
      weights[c] = {pos, neg};
    } else if (tag == "spare") {
      const std::size_t v = bn_var(f);
      const std::uint32_t c = circuit(f);
      spares[v].push_back(c);
      weights[c] = {1.0, 0.0};
    } else {
      throw ParseError("unknown map line '" + tag + "'", line_no);
    }
  }

  std::vector<sdd::CircuitVar> ind(n);
  std::vector<std::vector<sdd::CircuitVar>> slots(n);
  std::vector<std::size_t> leaf_counts(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (indicators[v] < 0) {
      throw SchemaError("map has no indicator for variable '" + network.names()[v] + "'");
    }
    ind[v] = sdd::circuit_var(static_cast<std::uint32_t>(indicators[v]));
    const std::size_t leaves = network.cpt(variable(v)).leaf_count();
    if (params[v].size() != leaves) {
      throw SchemaError("map has " + std::to_string(params[v].size()) + " parameters for '" +
                        network.names()[v] + "', network has " + std::to_string(leaves) +
                        " leaves");
    }
    std::size_t expect = 0;
    for (const auto& [leaf, c] : params[v]) {
      if (leaf != expect++) throw SchemaError("map leaf indices are not contiguous");
      slots[v].push_back(sdd::circuit_var(c));
    }
    for (std::uint32_t c : spares[v]) slots[v].push_back(sdd::circuit_var(c));
    leaf_counts[v] = leaves;
  }
  sdd::WeightMap<double> w(max_var);
  for (const auto& [c, pw] : weights) w.set(sdd::circuit_var(c), pw.first, pw.second);
  return EncodingMap::from_parts(std::move(ind), std::move(slots), std::move(leaf_counts),
                                 std::move(w));
}

ModelFiles ModelFiles::in_directory(const std::filesystem::path& dir) {
  return {dir / "model.vtree", dir / "model.sdd", dir / "model.map"};
}

void save_compiled(const CompiledModel& model, const ModelFiles& files) {
  {
    auto out = open_out(files.vtree);
    sdd::save_vtree(out, model.manager().vtree());
  }
  {
    auto out = open_out(files.sdd);
    sdd::save_sdd(out, model.manager(), model.root());
  }
  auto out = open_out(files.map);
  save_encoding_map(out, model);
}

CompiledModel load_compiled(const ModelFiles& files, BayesianNetwork network) {
  auto vin = open_in(files.vtree);
  sdd::Vtree vtree = sdd::load_vtree(vin);
  auto min = open_in(files.map);
  EncodingMap encoding = load_encoding_map(min, network);
  for (VariableId v : network.ordering()) {
    if (!vtree.contains(encoding.indicator(v))) {
      throw SchemaError("vtree lacks the indicator of '" + network.name(v) + "'");
    }
    for (std::size_t i = 0; i < encoding.slot_count(v); ++i) {
      if (!vtree.contains(encoding.slot(v, i))) {
        throw SchemaError("vtree lacks a parameter of '" + network.name(v) + "'");
      }
    }
  }
  auto manager = std::make_unique<sdd::SddManager>(std::move(vtree));
  auto sin = open_in(files.sdd);
  sdd::Sdd root = sdd::load_sdd(sin, *manager);
  return CompiledModel::from_parts(std::move(manager), std::move(root), std::move(encoding),
                                   std::move(network));
}

}  // namespace tbn::compiler
