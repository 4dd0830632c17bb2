#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tbn/model/bitvector.hpp"
#include "tbn/model/types.hpp"

namespace tbn {

// Binary records stored column-wise as bitsets. Immutable once built; use
// DatasetBuilder or from_rows to construct.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> names, std::vector<BitVector> columns);

  static Dataset from_rows(std::vector<std::string> names,
                           const std::vector<std::vector<std::uint8_t>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return names_.size(); }
  bool empty() const noexcept { return rows_ == 0; }

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(VariableId v) const { return names_.at(index(v)); }
  // Throws LookupError for unknown names.
  VariableId find(const std::string& name) const;

  bool get(std::size_t row, VariableId col) const noexcept {
    return columns_[index(col)].test(row);
  }
  const BitVector& column(VariableId col) const noexcept {
    return columns_[index(col)];
  }

  Dataset select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<BitVector> columns_;
  std::size_t rows_ = 0;
};

class DatasetBuilder {
 public:
  DatasetBuilder(std::vector<std::string> names, std::size_t rows);

  void set(std::size_t row, VariableId col, bool value) noexcept {
    columns_[index(col)].set(row, value);
  }
  Dataset build() &&;

 private:
  std::vector<std::string> names_;
  std::vector<BitVector> columns_;
};

}  // namespace tbn
