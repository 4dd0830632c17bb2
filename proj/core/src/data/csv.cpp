#include "tbn/data/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "tbn/errors.hpp"

namespace tbn::data {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string f = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto b = f.find_first_not_of(" \t\r");
    const auto e = f.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : f.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    names = split_fields(line);
    break;
  }
  if (names.empty()) throw ParseError("missing CSV header", line_no);
  for (const auto& n : names) {
    if (n.empty()) throw ParseError("empty column name in CSV header", line_no);
  }

  const std::size_t cols = names.size();
  std::vector<std::vector<std::uint8_t>> columns(cols);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t col = 0;
    std::size_t i = 0;
    while (true) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (col >= cols) {
        throw ParseError("row " + std::to_string(rows + 1) + " has more than " +
                             std::to_string(cols) + " cells",
                         line_no);
      }
      const std::size_t start = i;
      while (i < line.size() && line[i] != ',') ++i;
      std::size_t end = i;
      while (end > start && (line[end - 1] == ' ' || line[end - 1] == '\t')) --end;
      if (end - start != 1 || (line[start] != '0' && line[start] != '1')) {
        throw ParseError("row " + std::to_string(rows + 1) + ", column '" + names[col] +
                             "': expected 0 or 1, got '" + line.substr(start, end - start) + "'",
                         line_no);
      }
      columns[col].push_back(static_cast<std::uint8_t>(line[start] - '0'));
      ++col;
      if (i == line.size()) break;
      ++i;
    }
    if (col != cols) {
      throw ParseError("row " + std::to_string(rows + 1) + " has " + std::to_string(col) +
                           " cells, header has " + std::to_string(cols),
                       line_no);
    }
    ++rows;
  }

  DatasetBuilder builder(names, rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (columns[c][r]) builder.set(r, variable(c), true);
    }
  }
  return std::move(builder).build();
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t c = 0; c < data.cols(); ++c) {
    if (c) out << ',';
    out << data.names()[c];
  }
  out << '\n';
  std::string line;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < data.cols(); ++c) {
      if (c) line += ',';
      line += data.get(r, variable(c)) ? '1' : '0';
    }
    line += '\n';
    out << line;
  }
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
  return read_csv(in);
}

void save_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  write_csv(out, data);
}

}  // namespace tbn::data
