#include "bcf/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "bcf/errors.hpp"

namespace bcf {

namespace {

std::vector<i64> poly_div_exact(std::vector<i64> num, const std::vector<i64>& den) {
  // den is monic.
  std::size_t dn = den.size() - 1;
  std::vector<i64> q(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    i64 coef = num[i];
    q[i - dn] = coef;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= coef * den[j];
  }
  return q;
}

}  // namespace

const std::vector<i64>& cyclotomic_polynomial(i64 M) {
  static std::map<i64, std::vector<i64>> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
  }
  std::vector<i64> p(static_cast<std::size_t>(M) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(M)] = 1;
  for (i64 d = 1; d < M; ++d)
    if (M % d == 0) p = poly_div_exact(p, cyclotomic_polynomial(d));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(M, std::move(p)).first->second;
}

CyclotomicSum::CyclotomicSum(i64 M) : M_(M), c_(static_cast<std::size_t>(M), 0) {
  if (M < 1) throw DomainError("CyclotomicSum: order must be positive");
}

CyclotomicSum CyclotomicSum::integer(i64 M, i64 n) {
  CyclotomicSum s(M);
  s.c_[0] = n;
  return s;
}

CyclotomicSum CyclotomicSum::embed(i64 M2) const {
  if (M2 % M_ != 0) throw DomainError("CyclotomicSum::embed: order does not divide target");
  CyclotomicSum r(M2);
  i64 f = M2 / M_;
  for (i64 k = 0; k < M_; ++k) r.c_[static_cast<std::size_t>(k * f)] = c_[static_cast<std::size_t>(k)];
  return r;
}

i64 common_order(const CyclotomicSum& a, const CyclotomicSum& b) { return lcm(a.order(), b.order()); }

CyclotomicSum& CyclotomicSum::operator+=(const CyclotomicSum& o) {
  if (o.M_ != M_) {
    i64 L = lcm(M_, o.M_);
    *this = embed(L);
    return *this += o.embed(L);
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

CyclotomicSum& CyclotomicSum::operator-=(const CyclotomicSum& o) { return *this += o * -1; }

CyclotomicSum CyclotomicSum::operator+(const CyclotomicSum& o) const {
  CyclotomicSum r = *this;
  return r += o;
}

CyclotomicSum CyclotomicSum::operator-(const CyclotomicSum& o) const {
  CyclotomicSum r = *this;
  return r -= o;
}

CyclotomicSum CyclotomicSum::operator*(const CyclotomicSum& o) const {
  i64 L = lcm(M_, o.M_);
  CyclotomicSum a = embed(L), b = o.embed(L), r(L);
  for (i64 i = 0; i < L; ++i) {
    i64 ai = a.c_[static_cast<std::size_t>(i)];
    if (ai == 0) continue;
    for (i64 j = 0; j < L; ++j) {
      i64 bj = b.c_[static_cast<std::size_t>(j)];
      if (bj != 0) r.c_[static_cast<std::size_t>((i + j) % L)] += ai * bj;
    }
  }
  return r;
}

CyclotomicSum CyclotomicSum::operator*(i64 s) const {
  CyclotomicSum r = *this;
  for (auto& v : r.c_) v *= s;
  return r;
}

CyclotomicSum CyclotomicSum::rotate(i64 k) const {
  CyclotomicSum r(M_);
  for (i64 i = 0; i < M_; ++i) r.c_[static_cast<std::size_t>(mod(i + k, M_))] = c_[static_cast<std::size_t>(i)];
  return r;
}

CyclotomicSum CyclotomicSum::conj() const {
  CyclotomicSum r(M_);
  for (i64 i = 0; i < M_; ++i) r.c_[static_cast<std::size_t>(mod(-i, M_))] = c_[static_cast<std::size_t>(i)];
  return r;
}

std::vector<i128> CyclotomicSum::reduced() const {
  const auto& phi = cyclotomic_polynomial(M_);
  std::size_t deg = phi.size() - 1;
  std::vector<i128> r(c_.begin(), c_.end());
  for (std::size_t i = r.size(); i-- > deg;) {
    i128 coef = r[i];
    if (coef == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= coef * phi[j];
  }
  r.resize(deg);
  return r;
}

bool CyclotomicSum::is_zero() const {
  for (i128 v : reduced())
    if (v != 0) return false;
  return true;
}

std::optional<i128> CyclotomicSum::as_integer() const {
  auto r = reduced();
  for (std::size_t i = 1; i < r.size(); ++i)
    if (r[i] != 0) return std::nullopt;
  return r.empty() ? i128(0) : r[0];
}

bool CyclotomicSum::equals_integer(i128 n) const {
  auto v = as_integer();
  return v && *v == n;
}

bool CyclotomicSum::equals_fraction(const Rational& q, i64 den) const {
  return (*this * q.denominator()).equals_integer(static_cast<i128>(q.numerator()) * den);
}

std::complex<double> CyclotomicSum::value() const {
  std::complex<double> s = 0;
  for (i64 k = 0; k < M_; ++k) {
    if (c_[static_cast<std::size_t>(k)] == 0) continue;
    double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(M_);
    s += static_cast<double>(c_[static_cast<std::size_t>(k)]) * std::complex<double>(std::cos(t), std::sin(t));
  }
  return s;
}

bool equal(const CyclotomicSum& a, const CyclotomicSum& b) { return (a - b).is_zero(); }

}  // namespace bcf
