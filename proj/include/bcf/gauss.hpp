#pragma once

// Orbital Gauss sums W_N(chi, a, b) = sum_{g in G_N} chi(det g) <g a, b>, finite Fourier
// transforms on V_N, and the table checks at levels p and p^2.

#include <map>
#include <random>
#include <vector>

#include "bcf/characters.hpp"
#include "bcf/cyclotomic.hpp"
#include "bcf/forms.hpp"
#include "bcf/orbits.hpp"
#include "bcf/report.hpp"

namespace bcf {

inline constexpr i64 kGaussGroupCap = 12'000'000;

// W for one a and several b at once; one pass over G_N. chi must have modulus dividing N.
// The sums live in Z[zeta_M] with M = lcm(N, value order of chi).
std::vector<CyclotomicSum> orbital_gauss_sums(const DirichletCharacter& chi, const Form& a,
                                              const std::vector<DualForm>& bs, i64 N, int threads = 1);
CyclotomicSum orbital_gauss_sum(const DirichletCharacter& chi, const Form& a, const DualForm& b, i64 N);

// b given in V through iota (requires 3 invertible mod N).
std::vector<CyclotomicSum> orbital_gauss_sums_V(const DirichletCharacter& chi, const Form& a,
                                                const std::vector<Form>& bs, i64 N, int threads = 1);

// A function on V_N (or V*_N) with values numerator(x) / den, numerator in Z[zeta_M].
// Stored sparsely; absent points are zero.
class FiniteFunction {
 public:
  enum class Domain { Primal, Dual };

  FiniteFunction(i64 N, Domain domain = Domain::Primal, i64 M = 1, i64 den = 1);

  i64 modulus() const { return N_; }
  Domain domain() const { return domain_; }
  i64 order() const { return M_; }
  i64 denominator() const { return den_; }
  const std::map<i64, CyclotomicSum>& support() const { return vals_; }

  // idx is form_index of a point with entries in [0, N).
  void set(i64 idx, const CyclotomicSum& numerator);
  void set_integer(i64 idx, i64 numerator);
  CyclotomicSum numerator(i64 idx) const;
  // Exact test of value(idx) == q.
  bool value_equals(i64 idx, const Rational& q) const;
  std::complex<double> value(i64 idx) const;

  // Point values as rationals, when every value is rational.
  bool is_rational() const;

 private:
  i64 N_;
  Domain domain_;
  i64 M_;
  i64 den_;
  std::map<i64, CyclotomicSum> vals_;
};

// Indicator functions (values 0/1, den = 1).
FiniteFunction indicator_disc_zero(i64 p);             // f_p on V_p
FiniteFunction indicator_phi(i64 p, bool with_max);    // Phi_p (false) or Phi'_p (true) on V_{p^2}
// f_{chi,a}(g a) = |G_a| chi(det g); the zero function when chi o det is nontrivial on G_a.
FiniteFunction f_chi_a(const DirichletCharacter& chi, const Form& a, i64 N);

// fhat(b) = N^{-4} sum_a f(a) <a, b>. Returns the numerator sum; value = result / (den N^4).
CyclotomicSum fourier_numerator(const FiniteFunction& f, i64 b_idx);
// Dense transform onto V*_N; cost N^4 * |supp f|, capped.
FiniteFunction fourier_transform(const FiniteFunction& f, i64 cap = 2'000'000'000);
// Inverse transform of a function on V*_N back to V_N: f(a) = sum_b g(b) <-a, b>.
FiniteFunction inverse_fourier_transform(const FiniteFunction& g, i64 cap = 2'000'000'000);

// f_t(a) = f(t a) and the CRT product of functions on V_{N1}, V_{N2}.
FiniteFunction scale_argument(const FiniteFunction& f, i64 t);
FiniteFunction crt_product(const FiniteFunction& f1, const FiniteFunction& f2);

// Table drivers.
VerificationReport verify_mori_table(i64 p, int threads = 1);
VerificationReport verify_singular_table(i64 p, int threads = 1);
// Level p: f_p against the three-valued formula. Level p^2: Phi_p and Phi'_p on every dual orbit.
VerificationReport verify_fourier_fp(i64 p);
VerificationReport verify_fourier_phi(i64 p, bool with_max);
VerificationReport verify_parseval(i64 p, bool with_max);

struct IdentityOptions {
  int samples = 20;
  unsigned seed = 1;
  int threads = 1;
};
// Identities around N: reduction (m | N), CRT decomposition, product Fourier rule,
// inversion over dual orbits and bi-equivariance.
VerificationReport check_reduction(i64 p, const IdentityOptions& opt);                     // N = p^2, m = p
VerificationReport check_decomposition(i64 N1, i64 N2, const IdentityOptions& opt);        // coprime
VerificationReport check_product_fourier(i64 N1, i64 N2, const IdentityOptions& opt);
VerificationReport check_inversion(i64 N, const DirichletCharacter& chi, const IdentityOptions& opt);
VerificationReport check_equivariance(i64 N, const DirichletCharacter& chi, int groups, int per_group,
                                      const IdentityOptions& opt);
VerificationReport check_identities(i64 N, const DirichletCharacter& chi, const IdentityOptions& opt);

// Random helpers shared by tests and drivers.
Mat2 random_group_element(i64 N, std::mt19937_64& rng);
Form random_form(i64 N, std::mt19937_64& rng);

// Render an element of Z[zeta_M] divided by den: "n/d" when rational, else a complex value.
std::string render(const CyclotomicSum& s, i64 den = 1);

}  // namespace bcf
