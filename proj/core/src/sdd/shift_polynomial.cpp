#include "tbn/sdd/shift_polynomial.hpp"

#include <algorithm>

namespace tbn::sdd {

ShiftPolynomial ShiftPolynomial::monomial(int offset, double coeff) {
  ShiftPolynomial p;
  if (coeff != 0.0) {
    p.lo_ = offset;
    p.coeffs_.assign(1, coeff);
  }
  return p;
}

ShiftPolynomial ShiftPolynomial::from_terms(const std::map<int, double>& terms) {
  ShiftPolynomial p;
  for (const auto& [d, c] : terms) p += monomial(d, c);
  return p;
}

double ShiftPolynomial::coeff(int offset) const noexcept {
  if (coeffs_.empty() || offset < lo_ || offset > max_offset()) return 0.0;
  return coeffs_[static_cast<std::size_t>(offset - lo_)];
}

double ShiftPolynomial::sum() const noexcept {
  double s = 0.0;
  for (double c : coeffs_) s += c;
  return s;
}

std::map<int, double> ShiftPolynomial::terms() const {
  std::map<int, double> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0.0) out.emplace(lo_ + static_cast<int>(i), coeffs_[i]);
  }
  return out;
}

void ShiftPolynomial::trim() {
  std::size_t first = 0;
  while (first < coeffs_.size() && coeffs_[first] == 0.0) ++first;
  if (first == coeffs_.size()) {
    coeffs_.clear();
    lo_ = 0;
    return;
  }
  std::size_t end = coeffs_.size();
  while (coeffs_[end - 1] == 0.0) --end;
  coeffs_ = std::vector<double>(coeffs_.begin() + static_cast<std::ptrdiff_t>(first),
                                coeffs_.begin() + static_cast<std::ptrdiff_t>(end));
  lo_ += static_cast<int>(first);
}

ShiftPolynomial& ShiftPolynomial::operator+=(const ShiftPolynomial& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  const int lo = std::min(lo_, other.lo_);
  const int hi = std::max(max_offset(), other.max_offset());
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    out[static_cast<std::size_t>(lo_ - lo) + i] += coeffs_[i];
  }
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) {
    out[static_cast<std::size_t>(other.lo_ - lo) + i] += other.coeffs_[i];
  }
  lo_ = lo;
  coeffs_ = std::move(out);
  trim();
  return *this;
}

ShiftPolynomial operator*(const ShiftPolynomial& a, const ShiftPolynomial& b) {
  ShiftPolynomial p;
  if (a.is_zero() || b.is_zero()) return p;
  p.lo_ = a.lo_ + b.lo_;
  p.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      p.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  p.trim();
  return p;
}

}  // namespace tbn::sdd
