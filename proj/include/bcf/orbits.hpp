#pragma once

// Orbit structure of G_N = GL2(Z/N) acting on V_N: types mod p and p^2, stabilizers,
// explicit orbit partitions and the census against closed-form counts.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcf/arith.hpp"
#include "bcf/forms.hpp"

namespace bcf {

enum class TypeSymbol : std::uint8_t {
  T3,
  T21,
  T111,
  T1_2_1,
  T1_3,
  T0,
  T1_2_1max,
  T1_2_1star,
  T1_3max,
  T1_3star,
  T1_3starstar,
  TpV,
};

std::string symbol_name(TypeSymbol s);
TypeSymbol parse_symbol(const std::string& s);
// Symbols occurring at level p and p^2.
const std::vector<TypeSymbol>& symbols_level1();
const std::vector<TypeSymbol>& symbols_level2();

// |GL2(Z/N)|.
i64 group_order(i64 N);

// Calls f(g, det g mod N) for every g in GL2(Z/N); entries in [0, N).
void for_each_group_element(i64 N, const std::function<void(const Mat2&, i64)>& f);

// Index of a form with entries in [0, N) in row-major order, and back.
inline i64 form_index(const Form& x, i64 N) { return ((x[0] * N + x[1]) * N + x[2]) * N + x[3]; }
inline Form form_at(i64 idx, i64 N) {
  Form x;
  for (int i = 3; i >= 0; --i) {
    x[i] = idx % N;
    idx /= N;
  }
  return x;
}
inline DualForm dual_at(i64 idx, i64 N) {
  Form x = form_at(idx, N);
  return {x[0], x[1], x[2], x[3]};
}

// Type of a in V_p by its roots in P^1(F_p).
TypeSymbol type_mod_p(const Form& a, i64 p);

// Classifier for V_{p^2}. For p >= 5 singular types use the valuation of P on the integer lift;
// for p in {2, 3} (or on request) types come from G-orbit closures of the D-sets.
class TypeClassifier {
 public:
  enum class Method { Valuation, OrbitClosure };
  explicit TypeClassifier(i64 p, std::optional<Method> method = std::nullopt);

  i64 prime() const { return p_; }
  Method method() const { return method_; }
  TypeSymbol level1(const Form& a) const;
  TypeSymbol level2(const Form& a) const;

 private:
  i64 p_;
  Method method_;
  std::vector<std::uint8_t> t1_;
  std::vector<std::uint8_t> t2_;  // only for OrbitClosure
};

// Membership in the D-sets that define the singular p^2-types.
bool in_D_set(TypeSymbol s, const Form& a, i64 p);

// The functions Phi_p and Phi'_p on V_{p^2} and f_p on V_p.
bool is_nonmaximal(TypeSymbol s);
bool is_nm_or_totally_ramified(TypeSymbol s);

// Closed-form counts at level p (e = 1) and p^2 (e = 2).
i64 closed_form_count(TypeSymbol s, i64 p, int e);

struct CensusEntry {
  i64 count = 0;
  i64 closed_form = 0;
  bool match = false;
};
std::map<TypeSymbol, CensusEntry> census(i64 p, int e);

// Stabilizer of a in G_{p^e}: recursive lift of the stabilizer mod p^{k-1}.
std::vector<Mat2> stabilizer(const Form& a, i64 p, int e);
i64 stabilizer_order(const Form& a, i64 p, int e);
// Full scan of G_N; cap on |G_N| guards the cost.
i64 stabilizer_order_scan(const Form& a, i64 N, i64 cap = 50'000'000);

// Orbits of G_N (or SL2(Z/N)) on V_N or V*_N computed by closure under generators.
class OrbitPartition {
 public:
  enum class Space { Primal, Dual };
  struct Orbit {
    i64 rep;   // smallest index in the orbit
    i64 size;
  };
  OrbitPartition(i64 N, Space space = Space::Primal, bool special_linear = false, i64 cap = 8'000'000);

  i64 modulus() const { return N_; }
  std::size_t orbit_count() const { return orbits_.size(); }
  const std::vector<Orbit>& orbits() const { return orbits_; }
  std::int32_t orbit_of(i64 idx) const { return id_[static_cast<std::size_t>(idx)]; }
  // det g mod N for some g with x = g . rep(orbit(x)).
  i64 transporter_det(i64 idx) const { return det_[static_cast<std::size_t>(idx)]; }

 private:
  i64 N_;
  std::vector<std::int32_t> id_;
  std::vector<std::int32_t> det_;
  std::vector<Orbit> orbits_;
};

// Process-wide cache of partitions keyed by (N, space, group).
const OrbitPartition& shared_partition(i64 N, OrbitPartition::Space space = OrbitPartition::Space::Primal,
                                       bool special_linear = false);

// Generators of GL2(Z/N) (or SL2(Z/N)): elementary matrices and diag(t, 1).
std::vector<Mat2> group_generators(i64 N, bool special_linear = false);

struct OrbitClass {
  Form rep;
  i64 size = 0;
  i64 stabilizer = 0;
};
// Orbit decomposition of V_{p^e}(s) for e in {1, 2}. Representatives follow the standard
// normal forms where available (p >= 5); otherwise the smallest form in each orbit.
std::vector<OrbitClass> orbit_split(i64 p, TypeSymbol s, int e = 2);

struct G27Row {
  Form rep;
  i64 stabilizer = 0;
  i64 expected = 0;  // |Aut| * |Disc|^{-1}
};
std::vector<G27Row> g27_stabilizer_table();

// Smallest u > 0 that is not a square (resp. not a cube) mod p.
i64 nonsquare_mod(i64 p);
std::vector<i64> cube_class_reps(i64 p);

}  // namespace bcf
