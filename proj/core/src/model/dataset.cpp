#include "tbn/model/dataset.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "tbn/errors.hpp"

namespace tbn {

BitVector::BitVector(std::size_t bits, bool value)
    : bits_(bits), words_((bits + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  clear_tail();
}

void BitVector::clear_tail() noexcept {
  if (bits_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (bits_ % 64)) - 1;
  }
}

std::size_t BitVector::count() const noexcept {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BitVector& BitVector::operator&=(const BitVector& other) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

BitVector& BitVector::and_not(const BitVector& other) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

std::size_t count_and(const BitVector& a, const BitVector& b) noexcept {
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
  }
  return n;
}

std::size_t count_and(const BitVector& a, const BitVector& b, const BitVector& c) noexcept {
  const auto wa = a.words();
  const auto wb = b.words();
  const auto wc = c.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(wa[i] & wb[i] & wc[i]));
  }
  return n;
}

Dataset::Dataset(std::vector<std::string> names, std::vector<BitVector> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
  if (names_.size() != columns_.size()) {
    throw SchemaError("dataset has " + std::to_string(names_.size()) + " names but " +
                      std::to_string(columns_.size()) + " columns");
  }
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  for (const auto& c : columns_) {
    if (c.size() != rows_) throw SchemaError("dataset columns differ in length");
  }
}

Dataset Dataset::from_rows(std::vector<std::string> names,
                           const std::vector<std::vector<std::uint8_t>>& rows) {
  DatasetBuilder builder(std::move(names), rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (rows[r][c] > 1) {
        throw InputError("non-binary value at row " + std::to_string(r) + ", column " +
                         std::to_string(c));
      }
      builder.set(r, variable(c), rows[r][c] != 0);
    }
  }
  return std::move(builder).build();
}

VariableId Dataset::find(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw LookupError("unknown variable '" + name + "'");
  return variable(static_cast<std::size_t>(it - names_.begin()));
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  DatasetBuilder builder(names_, rows.size());
  for (std::size_t c = 0; c < cols(); ++c) {
    const BitVector& col = columns_[c];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (col.test(rows[r])) builder.set(r, variable(c), true);
    }
  }
  return std::move(builder).build();
}

DatasetBuilder::DatasetBuilder(std::vector<std::string> names, std::size_t rows)
    : names_(std::move(names)), columns_(names_.size(), BitVector(rows)) {}

Dataset DatasetBuilder::build() && {
  return Dataset(std::move(names_), std::move(columns_));
}

}  // namespace tbn
