#pragma once

// SL2(Z)-classes of integral binary cubic forms of bounded discriminant, with stabilizer weights,
// and the coefficient tables of the associated Dirichlet series.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bcf/arith.hpp"
#include "bcf/characters.hpp"
#include "bcf/cyclotomic.hpp"
#include "bcf/forms.hpp"
#include "bcf/gauss.hpp"

namespace bcf {

inline constexpr i64 kMaxDiscBound = 1'000'000;
inline constexpr std::array<i64, 4> kMaximalityPrimes{2, 3, 5, 7};
inline constexpr const char* kTableVersion = "bcf-classes-1";

struct ClassRecord {
  Form rep;
  i64 disc = 0;
  int stabilizer = 1;
  bool reducible = false;
  // Bit i set when the ring of rep is maximal at kMaximalityPrimes[i].
  std::uint8_t maximal_mask = 0;

  bool operator==(const ClassRecord&) const = default;
};

struct EnumerateOptions {
  int threads = 1;
  bool flags = true;  // compute reducibility and maximality
};

// All classes with 0 < sign * disc <= X, sorted by (|disc|, rep).
std::vector<ClassRecord> enumerate_classes(i64 X, int sign, const EnumerateOptions& opt = {});

// Covariant point in the upper half plane: Hessian root for disc > 0, complex root for disc < 0.
std::complex<long double> covariant_point(const Form& x);
// Moves x into the fundamental domain; returns the reduced form.
Form reduce_form(const Form& x);

struct Canonical {
  Form rep;
  int stabilizer = 1;
};
// Canonical class representative: lexicographically least sign-normalized form (a > 0, or a = 0 and
// b > 0) among forms of the class whose covariant lies in the closed fundamental domain.
Canonical canonicalize(const Form& x);
bool is_reducible(const Form& x);
std::uint8_t maximality_mask(const Form& x);

struct OracleResult {
  Form canonical{};
  bool inconclusive = false;
  i64 visited = 0;
  int stabilizer = 0;  // distinct group elements found fixing x
};
// Breadth-first closure under T, T^-1, S, S^-1 pruned to height <= H (0 picks the default);
// canonical is the visited form least in (height, lexicographic) order.
OracleResult bfs_canonical_oracle(const Form& x, i64 H = 0, i64 visit_cap = 2'000'000);

struct ClassNumberTable {
  int sign = 1;
  i64 X = 0;
  bool dual = false;
  std::map<i64, Rational> h;
  nlohmann::json meta;

  Rational at(i64 n) const;
  Rational total() const;
};
ClassNumberTable class_number_table(i64 X, int sign, const EnumerateOptions& opt = {});
ClassNumberTable class_number_table(const std::vector<ClassRecord>& classes, i64 X, int sign);
// Classes inside {3 | x2, 3 | x3} with |P*| = |P| / 27.
ClassNumberTable dual_class_number_table(i64 X, int sign, const EnumerateOptions& opt = {});
ClassNumberTable dual_class_number_table(const std::vector<ClassRecord>& classes_27X, i64 X, int sign);

// Exact coefficient table sum_{|disc| = n} w(x) / |Stab x|, stored as numerator / den.
struct CoefficientTable {
  i64 den = 1;
  std::map<i64, CyclotomicSum> c;

  CyclotomicSum numerator(i64 n) const;
  bool equals(i64 n, const Rational& q) const { return numerator(n).equals_fraction(q, den); }
};

// Checks SL2(Z/N)-invariance of f on its support and on random points; throws ContractViolation.
void validate_invariance(const FiniteFunction& f, unsigned seed = 1, int samples = 200);
CoefficientTable weighted_coeffs(const std::vector<ClassRecord>& classes, const FiniteFunction& f,
                                 bool validate = true);
CoefficientTable weighted_coeffs_fn(const std::vector<ClassRecord>& classes, i64 N,
                                    const std::function<CyclotomicSum(const Form&)>& w);

// Indicator of disc = 0 mod m on V_m.
FiniteFunction divisibility_indicator(i64 m);
// Coefficients of xi_m (disc divisible by m) and theta_N = sum_{m | N} mu(m) m xi_m.
CoefficientTable divisible_coeffs(const std::vector<ClassRecord>& classes, i64 m);
CoefficientTable theta_coeffs(const std::vector<ClassRecord>& classes, i64 N);

// Partial zeta xi(s, a) over SL2(Z/N)-orbits, directly and via the character average.
CoefficientTable partial_zeta_coeffs(const std::vector<ClassRecord>& classes, const Form& a, i64 N);
CoefficientTable partial_zeta_via_characters(const std::vector<ClassRecord>& classes, const Form& a, i64 N);

// Twisted series: r | n, (n / r, m) = 1, weight chi(n / r).
CoefficientTable twisted_coeffs(const std::vector<ClassRecord>& classes, i64 r, const DirichletCharacter& chi);

// sum_{n <= X, n = a mod N} h(n); N = 1 gives the full partial sum.
Rational progression_partial_sum(const ClassNumberTable& t, i64 N, i64 a, i64 X);

// JSON {n: {num, den}} for tables, plus persistence of the raw class list.
nlohmann::json table_to_json(const ClassNumberTable& t);
ClassNumberTable table_from_json(const nlohmann::json& j);
nlohmann::json coefficients_to_json(const CoefficientTable& t);
// Writes prefix.bin (sorted fixed-width records) and prefix.json (manifest).
void save_classes(const std::vector<ClassRecord>& classes, i64 X, int sign, const std::string& prefix);
std::vector<ClassRecord> load_classes(const std::string& prefix, i64* X = nullptr, int* sign = nullptr);

}  // namespace bcf
