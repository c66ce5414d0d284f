#pragma once

// Composite verification suites shared by the command-line driver and the acceptance run.

#include <string>
#include <vector>

#include "bcf/arith.hpp"
#include "bcf/report.hpp"

namespace bcf {

struct SuiteOptions {
  int threads = 1;
  unsigned seed = 1;
};

// Orbit-type counts on V_{p^e} against the closed forms.
VerificationReport census_report(i64 p, int e);
// table: mori, singular, fourier; level 0 runs both Fourier levels, 1 = f_p, 2 = Phi_p, Phi'_p and Parseval.
VerificationReport gauss_report(i64 p, const std::string& table, int level, const SuiteOptions& opt);
// h*_+(n) = h_-(n) and h*_-(n) = 3 h_+(n) for 0 < n <= X.
VerificationReport on_report(i64 X, const SuiteOptions& opt);
// Reduction-based classes against the breadth-first oracle for |disc| <= X.
VerificationReport oracle_report(i64 X);
// Reduction, CRT decomposition at 15, product Fourier, inversion, and the character average of
// partial zeta coefficients at N = 5 for n <= 500.
VerificationReport identity_report(const SuiteOptions& opt);
// Partial sums of h_sign in progressions mod N against main + secondary terms (informational).
VerificationReport progression_report(i64 X, const std::vector<i64>& moduli, const SuiteOptions& opt);

}  // namespace bcf
