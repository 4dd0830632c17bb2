#pragma once

#include <filesystem>
#include <iosfwd>

#include "tbn/model/dataset.hpp"

namespace tbn::data {

// Comma-separated, one header row of column names, cells 0 or 1. Throws
// ParseError naming row and column for anything else.
Dataset read_csv(std::istream& in);
void write_csv(std::ostream& out, const Dataset& data);

Dataset load_csv(const std::filesystem::path& path);
void save_csv(const std::filesystem::path& path, const Dataset& data);

}  // namespace tbn::data
