#pragma once

#include <cstddef>
#include <map>
#include <vector>

namespace tbn::sdd {

// Finite Laurent polynomial sum_d c_d z^d with real coefficients. Used as a
// semiring value whose exponent tracks a signed count of designated
// variables: addition is coefficient-wise, multiplication is convolution.
class ShiftPolynomial {
 public:
  ShiftPolynomial() = default;  // the zero polynomial

  static ShiftPolynomial zero() { return {}; }
  static ShiftPolynomial one() { return monomial(0, 1.0); }
  static ShiftPolynomial monomial(int offset, double coeff);
  static ShiftPolynomial from_terms(const std::map<int, double>& terms);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  int min_offset() const noexcept { return lo_; }
  int max_offset() const noexcept { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
  double coeff(int offset) const noexcept;
  double sum() const noexcept;
  std::map<int, double> terms() const;

  ShiftPolynomial& operator+=(const ShiftPolynomial& other);
  friend ShiftPolynomial operator+(ShiftPolynomial a, const ShiftPolynomial& b) {
    a += b;
    return a;
  }
  friend ShiftPolynomial operator*(const ShiftPolynomial& a, const ShiftPolynomial& b);

  friend bool operator==(const ShiftPolynomial&, const ShiftPolynomial&) = default;

 private:
  void trim();

  int lo_ = 0;
  std::vector<double> coeffs_;
};

}  // namespace tbn::sdd
