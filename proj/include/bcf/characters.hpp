#pragma once

// Dirichlet characters with exact root-of-unity values, Gauss and Jacobi sums,
// and the p-adic lift of a character's p-component.

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bcf/arith.hpp"
#include "bcf/cyclotomic.hpp"
#include "bcf/forms.hpp"

namespace bcf {

struct RootOfUnity {
  i64 order = 1;
  i64 k = 0;  // value exp(2 pi i k / order)

  RootOfUnity normalized() const;
  RootOfUnity operator*(const RootOfUnity& o) const;
  RootOfUnity inverse() const { return {order, mod(-k, order)}; }
  RootOfUnity pow(i64 n) const;
  bool operator==(const RootOfUnity& o) const;
  std::complex<double> value() const;
  bool is_one() const { return mod(k, order) == 0; }
};

class DirichletCharacter {
 public:
  struct Factor {
    i64 p;
    i64 q;  // prime power of the component containing this cyclic factor
    i64 generator;
    i64 order;
  };

  // Exponent vector indexes the cyclic factors returned by factors(m), in prime order.
  DirichletCharacter(i64 m, std::vector<i64> exponents);
  static DirichletCharacter trivial(i64 m);
  // Enumeration order is lexicographic in the exponent vector; --character indexes this list.
  static std::vector<DirichletCharacter> all(i64 m);
  static std::vector<Factor> factors(i64 m);

  i64 modulus() const { return m_; }
  i64 value_order() const { return L_; }
  const std::vector<i64>& exponents() const { return a_; }

  // chi(t) = zeta_L^k with k returned; -1 when gcd(t, m) > 1.
  i64 exponent(i64 t) const;
  std::optional<RootOfUnity> value(i64 t) const;
  std::complex<double> operator()(i64 t) const;

  i64 order() const;
  bool is_trivial() const { return order() == 1; }
  i64 conductor() const;
  bool is_primitive() const { return conductor() == m_; }
  DirichletCharacter primitive() const;

  DirichletCharacter pow(i64 n) const;
  DirichletCharacter conj() const { return pow(-1); }
  DirichletCharacter operator*(const DirichletCharacter& o) const;
  bool operator==(const DirichletCharacter& o) const { return m_ == o.m_ && a_ == o.a_; }

  // Component at p as a character mod p^{e_p}, and the complementary part mod m / p^{e_p}.
  DirichletCharacter p_part(i64 p) const;
  DirichletCharacter prime_to_p_part(i64 p) const;

  std::string label() const;

 private:
  i64 m_;
  i64 L_;
  std::vector<i64> a_;
  std::shared_ptr<const std::vector<i64>> values_;
};

// Classical Gauss sum sum_t chi(t) e(t/m) in Z[zeta_lcm(L, m)].
CyclotomicSum gauss_sum(const DirichletCharacter& chi);
// Jacobi sum sum_t chi1(t) chi2(1 - t); both characters mod the same prime.
CyclotomicSum jacobi_sum(const DirichletCharacter& chi1, const DirichletCharacter& chi2);

// Element p^ord * u of Z_p, with the unit u known modulo p^precision.
struct PadicUnitClass {
  i64 p;
  int ord;
  i64 unit;
  int precision;
};

// chi~_p: on units, the pullback of the primitive p-component chi_p; chi~_p(p) = chi'_p(p)^{-1}
// where chi'_p is the primitive prime-to-p part. Throws DomainError if the unit precision
// is below the conductor exponent of chi_p.
RootOfUnity lift_chi_p(const DirichletCharacter& chi, const PadicUnitClass& y);
RootOfUnity chi_tilde_at_p(const DirichletCharacter& chi, i64 p);
// Exponent c with p^c the conductor of chi_p.
int conductor_exponent(const DirichletCharacter& chi, i64 p);

// Split a form mod N = prod N_i into components and back.
std::vector<Form> crt_split(const Form& x, const std::vector<i64>& moduli);
Form crt_combine(const std::vector<Form>& parts, const std::vector<i64>& moduli);

}  // namespace bcf
