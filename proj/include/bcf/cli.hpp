#pragma once

// Command-line front end. Exit codes: 0 all checks pass, 1 verification mismatch, 2 usage or
// resource error.

#include <iosfwd>
#include <string>
#include <vector>

#include "bcf/gauss.hpp"

namespace bcf {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Weight grammar shared by `zeta coeffs` and `density residue`:
//   one            f = 1 on V_1
//   disc0:m        indicator of disc = 0 mod m on V_m
//   phi:p          Phi_p on V_{p^2};  phimax:p  Phi'_p on V_{p^2}
//   fchi:N:k:a,b,c,d   f_{chi,a} on V_N with chi the k-th character mod N
FiniteFunction parse_weight(const std::string& spec);

}  // namespace bcf
