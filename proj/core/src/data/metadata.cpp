#include "tbn/data/metadata.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "tbn/data/csv.hpp"
#include "tbn/errors.hpp"

namespace tbn::data {

std::string VariableMeta::code() const {
  if (name.size() > 3) {
    const std::string tail = name.substr(name.size() - 3);
    if (tail == "_T1" || tail == "_T2") return name.substr(0, name.size() - 3);
  }
  return name;
}

const char* to_string(VarKind kind) { return kind == VarKind::Drug ? "drug" : "disease"; }

const char* to_string(Group group) {
  switch (group) {
    case Group::K:
      return "K";
    case Group::L:
      return "L";
    default:
      return "-";
  }
}

const char* to_string(Period period) { return period == Period::T1 ? "T1" : "T2"; }

std::optional<Group> parse_group(const std::string& text) {
  if (text == "K") return Group::K;
  if (text == "L") return Group::L;
  if (text == "-") return Group::None;
  return std::nullopt;
}

std::vector<VariableMeta> read_metadata(std::istream& in) {
  std::vector<VariableMeta> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream f(line);
    std::string name, kind, group, period, extra;
    if (!(f >> name)) continue;
    if (!(f >> kind >> group >> period)) {
      throw ParseError("expected '<name> <disease|drug> <K|L|-> <T1|T2>'", line_no);
    }
    if (f >> extra) throw ParseError("trailing field '" + extra + "'", line_no);
    VariableMeta m;
    m.name = name;
    if (kind == "disease") {
      m.kind = VarKind::Disease;
    } else if (kind == "drug") {
      m.kind = VarKind::Drug;
    } else {
      throw ParseError("kind must be 'disease' or 'drug', got '" + kind + "'", line_no);
    }
    const auto g = parse_group(group);
    if (!g) throw ParseError("group must be K, L or -, got '" + group + "'", line_no);
    m.group = *g;
    if (period == "T1") {
      m.period = Period::T1;
    } else if (period == "T2") {
      m.period = Period::T2;
    } else {
      throw ParseError("period must be T1 or T2, got '" + period + "'", line_no);
    }
    out.push_back(std::move(m));
  }
  return out;
}

void write_metadata(std::ostream& out, const std::vector<VariableMeta>& meta) {
  out << "# name kind group period\n";
  for (const auto& m : meta) {
    out << m.name << ' ' << to_string(m.kind) << ' ' << to_string(m.group) << ' '
        << to_string(m.period) << '\n';
  }
}

std::vector<VariableMeta> load_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("metadata file '" + path.string() + "' not found");
  return read_metadata(in);
}

void save_metadata(const std::filesystem::path& path, const std::vector<VariableMeta>& meta) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  write_metadata(out, meta);
}

std::filesystem::path default_metadata_path(const std::filesystem::path& csv) {
  return std::filesystem::path(csv.string() + ".meta");
}

std::vector<VariableMeta> align_metadata(const std::vector<std::string>& names,
                                         std::vector<VariableMeta> meta) {
  std::map<std::string, VariableMeta> by_name;
  for (auto& m : meta) {
    const std::string name = m.name;
    if (!by_name.emplace(name, std::move(m)).second) {
      throw SchemaError("variable '" + name + "' described twice in metadata");
    }
  }
  std::vector<VariableMeta> out;
  for (const auto& n : names) {
    auto it = by_name.find(n);
    if (it == by_name.end()) throw SchemaError("no metadata for column '" + n + "'");
    out.push_back(std::move(it->second));
    by_name.erase(it);
  }
  if (!by_name.empty()) {
    throw SchemaError("metadata describes '" + by_name.begin()->first +
                      "', which is not a data column");
  }

  std::map<std::string, const VariableMeta*> t1_diseases;
  for (const auto& m : out) {
    if (m.kind == VarKind::Drug && m.period != Period::T1) {
      throw SchemaError("drug '" + m.name + "' must be observed in T1");
    }
    if (m.kind == VarKind::Disease && m.period == Period::T1) t1_diseases[m.code()] = &m;
  }
  std::set<std::string> paired;
  for (const auto& m : out) {
    if (m.kind != VarKind::Disease || m.period != Period::T2) continue;
    const auto it = t1_diseases.find(m.code());
    if (it == t1_diseases.end()) {
      throw SchemaError("T2 disease '" + m.name + "' has no T1 counterpart");
    }
    if (it->second->group != m.group) {
      throw SchemaError("T2 disease '" + m.name + "' and its T1 counterpart differ in group");
    }
    if (!paired.insert(m.code()).second) {
      throw SchemaError("disease code '" + m.code() + "' has two T2 variables");
    }
  }
  return out;
}

LoadedData load_dataset(const std::filesystem::path& csv,
                        const std::optional<std::filesystem::path>& meta) {
  LoadedData out;
  out.data = load_csv(csv);
  out.meta = align_metadata(out.data.names(), load_metadata(meta.value_or(default_metadata_path(csv))));
  return out;
}

}  // namespace tbn::data
