#include "tbn/data/network_io.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tbn/errors.hpp"

namespace tbn::data {

namespace {

std::string exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Lines {
 public:
  explicit Lines(std::istream& in) : in_(in) {}

  // Next non-blank, non-comment line split into fields; false at end.
  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream probe(line);
      std::string first;
      if (!(probe >> first) || first == "c") continue;
      fields = std::istringstream(line);
      return true;
    }
    return false;
  }
  std::size_t line() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

template <class T>
T field(std::istringstream& f, const Lines& lines, const char* what) {
  T value{};
  if (!(f >> value)) throw ParseError(std::string("expected ") + what, lines.line());
  return value;
}

void expect_tag(std::istringstream& f, const Lines& lines, const std::string& tag) {
  const auto got = field<std::string>(f, lines, tag.c_str());
  if (got != tag) throw ParseError("expected '" + tag + "', got '" + got + "'", lines.line());
}

}  // namespace

void write_network(std::ostream& out, const BayesianNetwork& bn) {
  out << "bn " << bn.size() << ' ' << exact(bn.alpha()) << '\n';
  for (std::size_t v = 0; v < bn.size(); ++v) out << "var " << v << ' ' << bn.names()[v] << '\n';
  out << "order";
  for (VariableId v : bn.ordering()) out << ' ' << index(v);
  out << '\n';
  for (std::size_t v = 0; v < bn.size(); ++v) {
    const CptTree& tree = bn.cpt(variable(v));
    out << "cpt " << v << ' ' << tree.nodes().size() << '\n';
    // Nodes are stored in preorder already.
    for (const CptTree::Node& n : tree.nodes()) {
      if (n.is_leaf()) {
        out << "P " << n.counts.count_true << ' ' << n.counts.count_false << ' '
            << exact(n.prob_true) << '\n';
      } else {
        out << "S " << n.test << '\n';
      }
    }
  }
}

BayesianNetwork read_network(std::istream& in) {
  Lines lines(in);
  std::istringstream f;
  if (!lines.next(f)) throw ParseError("missing 'bn' header", lines.line());
  expect_tag(f, lines, "bn");
  const auto count = field<std::size_t>(f, lines, "variable count");
  const auto alpha = field<double>(f, lines, "alpha");

  std::vector<std::string> names(count);
  std::vector<bool> named(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    if (!lines.next(f)) throw ParseError("missing 'var' line", lines.line());
    expect_tag(f, lines, "var");
    const auto id = field<std::size_t>(f, lines, "variable id");
    if (id >= count || named[id]) throw ParseError("bad or repeated variable id", lines.line());
    names[id] = field<std::string>(f, lines, "variable name");
    named[id] = true;
  }

  if (!lines.next(f)) throw ParseError("missing 'order' line", lines.line());
  expect_tag(f, lines, "order");
  std::vector<VariableId> ordering;
  std::size_t id = 0;
  while (f >> id) {
    if (id >= count) throw ParseError("ordering refers to unknown variable", lines.line());
    ordering.push_back(variable(id));
  }
  if (!f.eof()) throw ParseError("malformed ordering", lines.line());

  std::vector<CptTree> cpts(count);
  std::vector<bool> have(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    if (!lines.next(f)) throw ParseError("missing 'cpt' block", lines.line());
    expect_tag(f, lines, "cpt");
    const auto v = field<std::size_t>(f, lines, "variable id");
    if (v >= count || have[v]) throw ParseError("bad or repeated cpt variable", lines.line());
    const auto n = field<std::size_t>(f, lines, "node count");
    if (n == 0) throw ParseError("a CPT-tree needs at least one node", lines.line());

    std::vector<CptTree::Node> nodes;
    nodes.reserve(n);
    // Rebuild child links from preorder.
    std::function<std::int32_t()> parse = [&]() -> std::int32_t {
      if (nodes.size() >= n) throw ParseError("CPT-tree has more nodes than announced", lines.line());
      if (!lines.next(f)) throw ParseError("truncated CPT-tree", lines.line());
      const auto tag = field<std::string>(f, lines, "node tag");
      const auto at = static_cast<std::int32_t>(nodes.size());
      nodes.emplace_back();
      if (tag == "P") {
        CptTree::Node& leaf = nodes.back();
        leaf.counts.count_true = field<std::uint64_t>(f, lines, "count_true");
        leaf.counts.count_false = field<std::uint64_t>(f, lines, "count_false");
        leaf.prob_true = field<double>(f, lines, "prob_true");
      } else if (tag == "S") {
        const auto test = field<std::int64_t>(f, lines, "test variable");
        if (test < 0 || static_cast<std::size_t>(test) >= count) {
          throw ParseError("split on unknown variable", lines.line());
        }
        nodes.back().test = static_cast<std::int32_t>(test);
        const std::int32_t t = parse();
        const std::int32_t fl = parse();
        nodes[static_cast<std::size_t>(at)].child_true = t;
        nodes[static_cast<std::size_t>(at)].child_false = fl;
      } else {
        throw ParseError("unknown CPT-tree node '" + tag + "'", lines.line());
      }
      return at;
    };
    parse();
    if (nodes.size() != n) throw ParseError("CPT-tree node count mismatch", lines.line());
    try {
      cpts[v] = CptTree(std::move(nodes));
    } catch (const Error& e) {
      throw ParseError(e.what(), lines.line());
    }
    have[v] = true;
  }
  if (lines.next(f)) throw ParseError("unexpected content after the last CPT-tree", lines.line());
  try {
    return BayesianNetwork(std::move(names), std::move(ordering), std::move(cpts), alpha);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), lines.line());
  }
}

BayesianNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
  return read_network(in);
}

void save_network(const std::filesystem::path& path, const BayesianNetwork& bn) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  write_network(out, bn);
}

}  // namespace tbn::data
