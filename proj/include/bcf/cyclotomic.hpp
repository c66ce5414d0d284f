#pragma once

// Exact elements of Z[zeta_M] stored as exponent histograms sum_k c_k zeta_M^k.
// Equality is decided by reducing modulo the cyclotomic polynomial Phi_M.

#include <complex>
#include <optional>
#include <vector>

#include "bcf/arith.hpp"

namespace bcf {

// Coefficients of Phi_M, lowest degree first (cached).
const std::vector<i64>& cyclotomic_polynomial(i64 M);

class CyclotomicSum {
 public:
  CyclotomicSum() : CyclotomicSum(1) {}
  explicit CyclotomicSum(i64 M);
  static CyclotomicSum integer(i64 M, i64 n);

  i64 order() const { return M_; }
  const std::vector<i64>& coefficients() const { return c_; }
  void add(i64 k, i64 v = 1) { c_[static_cast<std::size_t>(mod(k, M_))] += v; }

  // Re-express in Z[zeta_M2]; requires M | M2.
  CyclotomicSum embed(i64 M2) const;

  CyclotomicSum& operator+=(const CyclotomicSum& o);
  CyclotomicSum& operator-=(const CyclotomicSum& o);
  CyclotomicSum operator+(const CyclotomicSum& o) const;
  CyclotomicSum operator-(const CyclotomicSum& o) const;
  CyclotomicSum operator*(const CyclotomicSum& o) const;
  CyclotomicSum operator*(i64 s) const;
  // Multiply by zeta_M^k.
  CyclotomicSum rotate(i64 k) const;
  CyclotomicSum conj() const;

  // Remainder modulo Phi_M: canonical coordinates in the power basis of length phi(M).
  std::vector<i128> reduced() const;
  bool is_zero() const;
  bool equals_integer(i128 n) const;
  // Does self / den equal q?
  bool equals_fraction(const Rational& q, i64 den) const;
  std::optional<i128> as_integer() const;

  std::complex<double> value() const;

 private:
  i64 M_;
  std::vector<i64> c_;
};

// Bring two sums into the common field Q(zeta_lcm).
i64 common_order(const CyclotomicSum& a, const CyclotomicSum& b);
bool equal(const CyclotomicSum& a, const CyclotomicSum& b);

}  // namespace bcf
