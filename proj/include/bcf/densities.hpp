#pragma once

// Local densities B_{p^e}, C_{p^e} behind the residues at s = 1 and s = 5/6, their f-weighted
// distributions, the residue assembly, gamma-factor matrices and the progression-bias constant.

#include <complex>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "bcf/arith.hpp"
#include "bcf/characters.hpp"
#include "bcf/forms.hpp"
#include "bcf/gauss.hpp"
#include "bcf/report.hpp"

namespace bcf {

using cplx = std::complex<double>;

// Laurent polynomial in x = chi~_p(p) p^{-1/3} with rational coefficients (x^3 = 1/p for cubic chi).
struct XPoly {
  std::map<int, Rational> c;

  XPoly() = default;
  XPoly(std::initializer_list<std::pair<const int, Rational>> terms) : c(terms) {}
  cplx at(cplx x) const;
  XPoly operator*(const XPoly& o) const;
  XPoly operator+(const XPoly& o) const;
  std::string str() const;
};

struct LocalDensityValue {
  cplx value;
  std::optional<XPoly> exact;
};

// x = chi~_p(p) p^{-1/3}.
cplx x_variable(const DirichletCharacter& chi, i64 p);

Rational B_prime(const Form& a, i64 p, int e);
// I_{p^e}(y, chi); requires e >= c, the conductor exponent of chi at p.
LocalDensityValue I_pe(i64 y, const DirichletCharacter& chi, i64 p, int e);

// Group average of B'; |G_{p^e}| is capped by kDensityGroupCap.
inline constexpr i64 kDensityGroupCap = 20'000'000;
Rational B_pe(const Form& a, i64 p, int e);
// C_{p^e}(a, chi) as an average over primitive row vectors (u, v) of I(a(u, v)).
LocalDensityValue C_pe(const Form& a, const DirichletCharacter& chi, i64 p, int e);
// The same quantity as a G_{p^e}-average of I((ga)_1); chi must be unramified at p.
LocalDensityValue C_pe_group(const Form& a, const DirichletCharacter& chi, i64 p, int e);

// (1 - p^-2) C_{p^e}(a, chi) / chi~_p(P(a) / p^ord) for a of maximal type at p.
cplx tilde_C(const Form& a, const DirichletCharacter& chi, i64 p, int e);

struct Distributions {
  cplx A, B, C;
  std::optional<Rational> A_exact, B_exact;
};
// A_N(f), B_N(f), C_N(f, chi) for f on V_N.
Distributions distributions(const FiniteFunction& f, const DirichletCharacter& chi);

// Residue constants and special values.
struct ResidueVector {
  cplx plus, minus;
};
ResidueVector alpha_vector();
ResidueVector beta_vector();
ResidueVector gamma_vector();
double zeta_one_third();    // 50-digit constant
double gamma_two_thirds();  // 50-digit constant
// Compare the stored constants with an independent evaluation; returns the worst relative error.
double verify_constants();

// Hurwitz zeta by Euler-Maclaurin, real s != 1 and 0 < q <= 1.
double hurwitz_zeta(double s, double q);
// L(s, chi) for the primitive character inducing chi; *terms receives the explicit-sum length.
cplx dirichlet_L(double s, const DirichletCharacter& chi, int* terms = nullptr);
cplx complex_gamma(cplx z);

struct Residues {
  ResidueVector s1, s56;
  int L_terms = 0;
};
// Residues of xi(s, f) at s = 1 and s = 5/6 for f in C(V_N, chi).
Residues residue_of_zeta(const FiniteFunction& f, const DirichletCharacter& chi);

struct GammaMatrices {
  Eigen::Matrix2cd M, Delta_plus_minus;  // Delta as a diagonal matrix
};
GammaMatrices gamma_matrices(cplx s);
struct GammaIdentity {
  bool ok = false;
  double relative_error = 0;
  bool near_pole = false;
};
// Delta(1 - s) T M(s) = Delta(s) T A^-1 to relative 1e-8.
GammaIdentity identity_check(cplx s);

// Residue at s = 5/6 of xi_sign(s, chi) for chi primitive of odd conductor.
cplx standard_L_residue(const DirichletCharacter& chi, int sign);
// Sum over primitive chi with chi^6 = 1, conductor | N and the local order conditions.
cplx bias_constant_K1(i64 N, i64 a);
struct ProgressionPrediction {
  double main = 0, secondary = 0;
};
ProgressionPrediction progression_prediction(i64 N, i64 a, double X, int sign);

// Table suites: ur1, urmax, urnm, rm1, rmnm, rmmax, corollaries, gamma.
VerificationReport verify_residue_tables(const std::string& suite);
const std::vector<std::string>& residue_suites();

}  // namespace bcf
