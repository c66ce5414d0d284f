#include "bcf/arith.hpp"

#include <cstdlib>

#include "bcf/errors.hpp"

namespace bcf {

i64 gcd(i64 a, i64 b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 lcm(i64 a, i64 b) { return a / gcd(a, b) * b; }

i64 pow_mod(i64 base, i64 exp, i64 n) {
  if (n == 1) return 0;
  i64 r = 1;
  base = mod(base, n);
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, base, n);
    base = mulmod(base, base, n);
    exp >>= 1;
  }
  return r;
}

i64 inverse_mod(i64 a, i64 n) {
  i64 r0 = n, r1 = mod(a, n), s0 = 0, s1 = 1;
  while (r1 != 0) {
    i64 q = r0 / r1;
    i64 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw DomainError("inverse_mod: " + std::to_string(a) + " is not a unit mod " + std::to_string(n));
  return mod(s0, n);
}

bool is_unit(i64 a, i64 n) { return gcd(mod(a, n), n) == 1; }

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

i64 ipow(i64 base, int exp) {
  i64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<PrimePower> factorize(i64 n) {
  if (n < 1) throw DomainError("factorize: n must be positive");
  std::vector<PrimePower> out;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.e;
      pp.q *= p;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

i64 euler_phi(i64 n) {
  i64 r = 1;
  for (const auto& f : factorize(n)) r *= (f.p - 1) * (f.q / f.p);
  return r;
}

int mobius(i64 n) {
  int r = 1;
  for (const auto& f : factorize(n)) {
    if (f.e > 1) return 0;
    r = -r;
  }
  return r;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> out;
  for (i64 d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

int valuation(i128 x, i64 p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (x % p == 0 && v < cap) {
    x /= p;
    ++v;
  }
  return v;
}

i64 crt(const std::vector<i64>& residues, const std::vector<i64>& moduli) {
  i64 x = 0, m = 1;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    i64 mi = moduli[i];
    if (gcd(m, mi) != 1) throw DomainError("crt: moduli are not coprime");
    i64 t = mulmod(mod(residues[i] - x, mi), inverse_mod(m % mi, mi), mi);
    x += m * t;
    m *= mi;
    x = mod(x, m);
  }
  return x;
}

std::string to_string(i128 x) {
  if (x == 0) return "0";
  bool neg = x < 0;
  std::string s;
  while (x != 0) {
    int d = static_cast<int>(x % 10);
    s.insert(s.begin(), static_cast<char>('0' + (d < 0 ? -d : d)));
    x /= 10;
  }
  return neg ? "-" + s : s;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace bcf
