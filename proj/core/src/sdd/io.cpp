#include "tbn/sdd/io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tbn/errors.hpp"

namespace tbn::sdd {

namespace {

// Yields non-comment, non-blank lines with their 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == 'c') continue;
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
T field(std::istringstream& fields, const LineReader& reader, const char* what) {
  T value{};
  if (!(fields >> value)) throw ParseError(std::string("expected ") + what, reader.line());
  return value;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t x) noexcept {
  h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdull;
}

}  // namespace

void save_vtree(std::ostream& out, const Vtree& vtree) {
  out << "c vtree: L <id> <var> | I <id> <left> <right>\n";
  out << "vtree " << vtree.size() << '\n';
  if (vtree.empty()) return;
  std::vector<std::pair<std::int32_t, bool>> stack{{vtree.root(), false}};
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    const auto& n = vtree.node(v);
    if (n.is_leaf()) {
      out << "L " << v << ' ' << n.var << '\n';
    } else if (expanded) {
      out << "I " << v << ' ' << n.left << ' ' << n.right << '\n';
    } else {
      stack.push_back({v, true});
      stack.push_back({n.right, false});
      stack.push_back({n.left, false});
    }
  }
}

Vtree load_vtree(std::istream& in) {
  LineReader reader(in);
  std::istringstream fields;
  if (!reader.next(fields)) throw ParseError("missing vtree header", reader.line());
  if (field<std::string>(fields, reader, "'vtree'") != "vtree") {
    throw ParseError("expected 'vtree' header", reader.line());
  }
  const auto count = field<std::size_t>(fields, reader, "node count");
  std::vector<Vtree::Node> nodes(count);
  std::vector<bool> seen(count, false);
  std::size_t lines = 0;
  while (reader.next(fields)) {
    const auto tag = field<std::string>(fields, reader, "node tag");
    const auto id = field<std::int64_t>(fields, reader, "node id");
    if (id < 0 || static_cast<std::size_t>(id) >= count) {
      throw ParseError("vtree node id out of range", reader.line());
    }
    if (seen[static_cast<std::size_t>(id)]) throw ParseError("duplicate vtree node id", reader.line());
    seen[static_cast<std::size_t>(id)] = true;
    Vtree::Node& n = nodes[static_cast<std::size_t>(id)];
    if (tag == "L") {
      const auto var = field<std::int64_t>(fields, reader, "variable");
      if (var <= 0) throw ParseError("vtree variables must be positive", reader.line());
      n.var = static_cast<std::uint32_t>(var);
    } else if (tag == "I") {
      const auto left = field<std::int64_t>(fields, reader, "left child");
      const auto right = field<std::int64_t>(fields, reader, "right child");
      if (left < 0 || right < 0 || static_cast<std::size_t>(left) >= count ||
          static_cast<std::size_t>(right) >= count || !seen[static_cast<std::size_t>(left)] ||
          !seen[static_cast<std::size_t>(right)]) {
        throw ParseError("vtree children must be listed before their parent", reader.line());
      }
      n.left = static_cast<std::int32_t>(left);
      n.right = static_cast<std::int32_t>(right);
    } else {
      throw ParseError("unknown vtree line '" + tag + "'", reader.line());
    }
    ++lines;
  }
  if (lines != count) {
    throw ParseError("vtree header announces " + std::to_string(count) + " nodes, found " +
                         std::to_string(lines),
                     reader.line());
  }
  try {
    return Vtree::from_nodes(std::move(nodes));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), reader.line());
  }
}

void save_sdd(std::ostream& out, const SddManager& m, const Sdd& root) {
  // Structural fingerprints give an element order that does not depend on
  // the manager's internal node ids.
  std::unordered_map<NodeId, std::uint64_t> print;
  std::unordered_map<NodeId, std::vector<Element>> ordered;
  m.for_each_node(root, [&](NodeId n) {
    std::uint64_t h = mix(0, static_cast<std::uint64_t>(m.kind(n)));
    switch (m.kind(n)) {
      case NodeKind::Literal:
        h = mix(h, static_cast<std::uint64_t>(m.literal_of(n).to_signed()));
        break;
      case NodeKind::Decision: {
        std::vector<Element> elems(m.elements(n).begin(), m.elements(n).end());
        std::sort(elems.begin(), elems.end(), [&](const Element& a, const Element& b) {
          return std::pair(print.at(a.prime), print.at(a.sub)) <
                 std::pair(print.at(b.prime), print.at(b.sub));
        });
        h = mix(h, static_cast<std::uint64_t>(m.vtree_of(n)));
        for (const Element& e : elems) h = mix(mix(h, print.at(e.prime)), print.at(e.sub));
        ordered.emplace(n, std::move(elems));
        break;
      }
      default:
        break;
    }
    print.emplace(n, h);
  });

  std::vector<NodeId> order;
  std::unordered_map<NodeId, std::size_t> local;
  std::vector<std::pair<NodeId, std::size_t>> stack{{root.id(), 0}};
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (local.contains(n)) {
      stack.pop_back();
      continue;
    }
    const auto it = ordered.find(n);
    const std::size_t children = it == ordered.end() ? 0 : 2 * it->second.size();
    if (next < children) {
      const Element& e = it->second[next / 2];
      const NodeId child = next % 2 == 0 ? e.prime : e.sub;
      ++next;
      if (!local.contains(child)) stack.push_back({child, 0});
      continue;
    }
    const NodeId done = n;
    stack.pop_back();
    local.emplace(done, order.size());
    order.push_back(done);
  }

  out << "c sdd: F <id> | T <id> | L <id> <vtree> <lit> | D <id> <vtree> <k> {<prime> <sub>}*\n";
  out << "sdd " << order.size() << '\n';
  for (NodeId n : order) {
    const std::size_t id = local.at(n);
    switch (m.kind(n)) {
      case NodeKind::False:
        out << "F " << id << '\n';
        break;
      case NodeKind::True:
        out << "T " << id << '\n';
        break;
      case NodeKind::Literal:
        out << "L " << id << ' ' << m.vtree_of(n) << ' ' << m.literal_of(n).to_signed() << '\n';
        break;
      default: {
        const auto& elems = ordered.at(n);
        out << "D " << id << ' ' << m.vtree_of(n) << ' ' << elems.size();
        for (const Element& e : elems) out << ' ' << local.at(e.prime) << ' ' << local.at(e.sub);
        out << '\n';
      }
    }
  }
}

Sdd load_sdd(std::istream& in, SddManager& m) {
  LineReader reader(in);
  std::istringstream fields;
  if (!reader.next(fields)) throw ParseError("missing sdd header", reader.line());
  if (field<std::string>(fields, reader, "'sdd'") != "sdd") {
    throw ParseError("expected 'sdd' header", reader.line());
  }
  const auto count = field<std::size_t>(fields, reader, "node count");
  std::vector<Sdd> nodes(count);
  Sdd last;
  std::size_t lines = 0;
  const Vtree& vt = m.vtree();

  auto node_ref = [&](std::int64_t id) -> const Sdd& {
    if (id < 0 || static_cast<std::size_t>(id) >= count || !nodes[static_cast<std::size_t>(id)].valid()) {
      throw ParseError("reference to node " + std::to_string(id) + " before its definition",
                       reader.line());
    }
    return nodes[static_cast<std::size_t>(id)];
  };

  while (reader.next(fields)) {
    const auto tag = field<std::string>(fields, reader, "node tag");
    const auto id = field<std::int64_t>(fields, reader, "node id");
    if (id < 0 || static_cast<std::size_t>(id) >= count) {
      throw ParseError("sdd node id out of range", reader.line());
    }
    if (nodes[static_cast<std::size_t>(id)].valid()) {
      throw ParseError("duplicate sdd node id", reader.line());
    }
    Sdd node;
    if (tag == "F") {
      node = m.false_sdd();
    } else if (tag == "T") {
      node = m.true_sdd();
    } else if (tag == "L") {
      const auto v = field<std::int64_t>(fields, reader, "vtree id");
      const auto lit = field<std::int64_t>(fields, reader, "literal");
      if (lit == 0) throw ParseError("literal 0 is invalid", reader.line());
      const Literal l = Literal::from_signed(lit);
      if (!vt.contains(l.var) || vt.leaf_of(l.var) != v) {
        throw ParseError("literal does not match its vtree leaf", reader.line());
      }
      node = m.literal(l);
    } else if (tag == "D") {
      const auto v = field<std::int64_t>(fields, reader, "vtree id");
      const auto k = field<std::int64_t>(fields, reader, "element count");
      if (v < 0 || static_cast<std::size_t>(v) >= vt.size() ||
          vt.node(static_cast<std::int32_t>(v)).is_leaf()) {
        throw ParseError("decision node must reference an internal vtree node", reader.line());
      }
      if (k <= 0) throw ParseError("decision node needs at least one element", reader.line());
      std::vector<Element> elements;
      Sdd primes = m.false_sdd();
      for (std::int64_t i = 0; i < k; ++i) {
        const Sdd& p = node_ref(field<std::int64_t>(fields, reader, "prime id"));
        const Sdd& s = node_ref(field<std::int64_t>(fields, reader, "sub id"));
        for (const Element& e : elements) {
          if (!m.conjoin(p, Sdd(&m, e.prime)).is_false()) {
            throw ParseError("primes are not mutually exclusive", reader.line());
          }
        }
        if (p.is_false()) throw ParseError("false prime", reader.line());
        primes = m.disjoin(primes, p);
        elements.push_back({p.id(), s.id()});
      }
      if (!primes.is_true()) throw ParseError("primes do not cover all assignments", reader.line());
      try {
        node = m.make_decision(static_cast<std::int32_t>(v), std::move(elements));
      } catch (const Error& e) {
        throw ParseError(e.what(), reader.line());
      }
    } else {
      throw ParseError("unknown sdd line '" + tag + "'", reader.line());
    }
    nodes[static_cast<std::size_t>(id)] = node;
    last = std::move(node);
    ++lines;
  }
  if (lines != count || !last.valid()) {
    throw ParseError("sdd header announces " + std::to_string(count) + " nodes, found " +
                         std::to_string(lines),
                     reader.line());
  }
  return last;
}

}  // namespace tbn::sdd
