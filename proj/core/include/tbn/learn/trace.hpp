#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tbn::learn {

// One search event. `step` is a logical clock (position in the merged trace),
// not wall time, so traces are reproducible.
struct TraceRecord {
  std::uint64_t step = 0;
  std::size_t restart = 0;
  std::string event;  // start, split, reject, swap, snapshot, stop, select, refit
  std::vector<std::pair<std::string, std::string>> fields;

  TraceRecord& add(std::string key, std::string value);
  TraceRecord& add(std::string key, double value);  // 17 significant digits
  TraceRecord& add(std::string key, std::int64_t value);
  TraceRecord& add(std::string key, std::size_t value);

  std::optional<std::string> get(const std::string& key) const;
  // Throws ParseError when missing or not numeric.
  double number(const std::string& key) const;
};

// `step=<n> restart=<r> event=<type> key=value ...`, one record per line.
struct LearnTrace {
  std::vector<TraceRecord> records;

  void append(const LearnTrace& other);  // renumbers steps
  void write(std::ostream& out) const;
  static LearnTrace read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static LearnTrace load(const std::filesystem::path& path);
};

}  // namespace tbn::learn
