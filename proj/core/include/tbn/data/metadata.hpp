#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tbn/model/dataset.hpp"

namespace tbn::data {

enum class VarKind { Disease, Drug };
enum class Group { K, L, None };
enum class Period { T1, T2 };

struct VariableMeta {
  std::string name;
  VarKind kind = VarKind::Disease;
  Group group = Group::None;
  Period period = Period::T1;

  // Name without a trailing _T1 / _T2; pairs T1 and T2 diseases.
  std::string code() const;

  friend bool operator==(const VariableMeta&, const VariableMeta&) = default;
};

const char* to_string(VarKind kind);
const char* to_string(Group group);
const char* to_string(Period period);
std::optional<Group> parse_group(const std::string& text);

// One `<name> <disease|drug> <K|L|-> <T1|T2>` line per variable; `#` starts a
// comment. Throws ParseError with the line number.
std::vector<VariableMeta> read_metadata(std::istream& in);
void write_metadata(std::ostream& out, const std::vector<VariableMeta>& meta);
std::vector<VariableMeta> load_metadata(const std::filesystem::path& path);
void save_metadata(const std::filesystem::path& path, const std::vector<VariableMeta>& meta);

// `<csv>.meta`
std::filesystem::path default_metadata_path(const std::filesystem::path& csv);

// Reorders `meta` to follow `names` and checks the schema rules: every column
// described exactly once, drugs in T1, every T2 disease paired with a T1
// disease of the same code and group. Throws SchemaError.
std::vector<VariableMeta> align_metadata(const std::vector<std::string>& names,
                                         std::vector<VariableMeta> meta);

struct LoadedData {
  Dataset data;
  std::vector<VariableMeta> meta;  // aligned with data columns
};

// Reads the CSV and its sidecar (default_metadata_path unless given).
// Missing sidecar is a SchemaError.
LoadedData load_dataset(const std::filesystem::path& csv,
                        const std::optional<std::filesystem::path>& meta = std::nullopt);

}  // namespace tbn::data
