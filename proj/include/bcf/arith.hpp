#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <vector>

// Boost 1.74's mixed rational/integer operator== recurses forever under C++20 reversed-operator
// rewriting; exact non-template overloads take precedence.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == static_cast<std::int64_t>(b); }
}  // namespace boost

namespace bcf {

using i64 = std::int64_t;
using i128 = __int128;
using Rational = boost::rational<i64>;

inline i64 mod(i64 a, i64 n) {
  a %= n;
  return a < 0 ? a + n : a;
}

inline i64 mod128(i128 a, i64 n) {
  i128 r = a % n;
  return static_cast<i64>(r < 0 ? r + n : r);
}

inline i64 mulmod(i64 a, i64 b, i64 n) { return mod128(static_cast<i128>(a) * b, n); }

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
i64 pow_mod(i64 base, i64 exp, i64 n);
// Throws DomainError when a is not a unit mod n.
i64 inverse_mod(i64 a, i64 n);
bool is_unit(i64 a, i64 n);
bool is_prime(i64 n);
i64 ipow(i64 base, int exp);

struct PrimePower {
  i64 p;
  int e;
  i64 q;  // p^e
};

std::vector<PrimePower> factorize(i64 n);
i64 euler_phi(i64 n);
int mobius(i64 n);
std::vector<i64> divisors(i64 n);

// p-adic valuation of a nonzero integer; returns cap when x == 0 or the valuation reaches cap.
int valuation(i128 x, i64 p, int cap = 1000);

// Chinese remainder for pairwise coprime moduli; result in [0, prod).
i64 crt(const std::vector<i64>& residues, const std::vector<i64>& moduli);

std::string to_string(i128 x);
std::string to_string(const Rational& r);

}  // namespace bcf
