#pragma once

// Binary cubic forms x1 u^3 + x2 u^2 v + x3 u v^2 + x4 v^3, the twisted GL2 action,
// the dual space and the Delone-Faddeev ring.

#include <Eigen/Core>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <ostream>

#include "bcf/arith.hpp"

namespace bcf {

using BigInt = boost::multiprecision::cpp_int;

struct PrimalTag {};
struct DualTag {};

template <class T, class Tag>
struct Quartet {
  std::array<T, 4> c{};

  Quartet() = default;
  Quartet(T a, T b, T cc, T d) : c{a, b, cc, d} {}

  T& operator[](int i) { return c[i]; }
  const T& operator[](int i) const { return c[i]; }
  bool operator==(const Quartet&) const = default;
  auto operator<=>(const Quartet&) const = default;
  bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
};

template <class T>
using FormT = Quartet<T, PrimalTag>;
template <class T>
using DualFormT = Quartet<T, DualTag>;

using Form = FormT<i64>;
using DualForm = DualFormT<i64>;
using BigForm = FormT<BigInt>;

template <class T, class Tag>
std::ostream& operator<<(std::ostream& os, const Quartet<T, Tag>& x) {
  return os << "(" << x[0] << "," << x[1] << "," << x[2] << "," << x[3] << ")";
}

// g = (a b; c d). Over Z the determinant must be +-1; over Z/N it must be a unit.
template <class T>
struct Mat2T {
  T a = 1, b = 0, c = 0, d = 1;
  T det() const { return a * d - b * c; }
  Mat2T operator*(const Mat2T& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  bool operator==(const Mat2T&) const = default;
};

using Mat2 = Mat2T<i64>;

Mat2 mat_mul_mod(const Mat2& g, const Mat2& h, i64 N);
bool invertible_mod(const Mat2& g, i64 N);

// 4x4 integer matrices of the action before dividing by det g.
Eigen::Matrix<i64, 4, 4> action_matrix(const Mat2& g);
Eigen::Matrix<i64, 4, 4> dual_action_matrix(const Mat2& g);

namespace detail {

template <class T>
std::array<T, 4> substitute(const Mat2T<T>& g, const std::array<T, 4>& x) {
  const T &al = g.a, &be = g.b, &ga = g.c, &de = g.d;
  return {al * al * al * x[0] + al * al * be * x[1] + al * be * be * x[2] + be * be * be * x[3],
          3 * al * al * ga * x[0] + (al * al * de + 2 * al * be * ga) * x[1] +
              (be * be * ga + 2 * al * be * de) * x[2] + 3 * be * be * de * x[3],
          3 * al * ga * ga * x[0] + (be * ga * ga + 2 * al * ga * de) * x[1] +
              (al * de * de + 2 * be * ga * de) * x[2] + 3 * be * de * de * x[3],
          ga * ga * ga * x[0] + ga * ga * de * x[1] + ga * de * de * x[2] + de * de * de * x[3]};
}

template <class T>
std::array<T, 4> substitute_dual(const Mat2T<T>& g, const std::array<T, 4>& y) {
  const T &al = g.a, &be = g.b, &ga = g.c, &de = g.d;
  return {de * de * de * y[0] - 3 * ga * de * de * y[1] + 3 * ga * ga * de * y[2] - ga * ga * ga * y[3],
          -be * de * de * y[0] + (al * de * de + 2 * be * ga * de) * y[1] -
              (be * ga * ga + 2 * al * ga * de) * y[2] + al * ga * ga * y[3],
          be * be * de * y[0] - (be * be * ga + 2 * al * be * de) * y[1] +
              (al * al * de + 2 * al * be * ga) * y[2] - al * al * ga * y[3],
          -be * be * be * y[0] + 3 * al * be * be * y[1] - 3 * al * al * be * y[2] + al * al * al * y[3]};
}

void require_unimodular(i64 det);

}  // namespace detail

// Twisted action over Z: (g.x)(u,v) = det(g)^{-1} x(au + cv, bu + dv).
template <class T>
FormT<T> act(const Mat2T<T>& g, const FormT<T>& x) {
  T dt = g.det();
  detail::require_unimodular(static_cast<i64>(dt));
  auto y = detail::substitute(g, x.c);
  FormT<T> r;
  for (int i = 0; i < 4; ++i) r[i] = y[i] * dt;
  return r;
}

template <class T>
DualFormT<T> act_dual(const Mat2T<T>& g, const DualFormT<T>& y) {
  T dt = g.det();
  detail::require_unimodular(static_cast<i64>(dt));
  auto z = detail::substitute_dual(g, y.c);
  DualFormT<T> r;
  for (int i = 0; i < 4; ++i) r[i] = z[i] * dt;
  return r;
}

Form reduce(const Form& x, i64 N);
DualForm reduce(const DualForm& y, i64 N);

// Actions over Z/N. Throws InvalidGroupElement when det g is not a unit mod N.
Form act_mod(const Mat2& g, const Form& x, i64 N);
DualForm act_dual_mod(const Mat2& g, const DualForm& y, i64 N);

// Hot-loop variants: entries of g and x already reduced to [0, N), dinv = det(g)^{-1} mod N,
// and N < 20000 so that every intermediate fits in 64 bits.
inline Form act_mod_fast(const Mat2& g, i64 dinv, const Form& x, i64 N) {
  const i64 al = g.a, be = g.b, ga = g.c, de = g.d;
  const i64 a2 = al * al % N, b2 = be * be % N, c2 = ga * ga % N, d2 = de * de % N;
  const i64 ab = al * be % N, cd = ga * de % N, bc = be * ga % N;
  i64 y0 = (a2 * al % N * x[0] + a2 * be % N * x[1] + al * b2 % N * x[2] + b2 * be % N * x[3]) % N;
  i64 y1 = (3 * a2 * ga % N * x[0] + (a2 * de + 2 * ab % N * ga) % N * x[1] + (b2 * ga + 2 * ab % N * de) % N * x[2] +
            3 * b2 * de % N * x[3]) % N;
  i64 y2 = (3 * al * c2 % N * x[0] + (be * c2 + 2 * al * cd) % N * x[1] + (al * d2 + 2 * bc % N * de) % N * x[2] +
            3 * be * d2 % N * x[3]) % N;
  i64 y3 = (c2 * ga % N * x[0] + c2 * de % N * x[1] + ga * d2 % N * x[2] + d2 * de % N * x[3]) % N;
  return {y0 * dinv % N, y1 * dinv % N, y2 * dinv % N, y3 * dinv % N};
}

inline DualForm act_dual_mod_fast(const Mat2& g, i64 dinv, const DualForm& y, i64 N) {
  const i64 al = g.a, be = g.b, ga = g.c, de = g.d;
  const i64 a2 = al * al % N, b2 = be * be % N, c2 = ga * ga % N, d2 = de * de % N;
  const i64 cd = ga * de % N, ab = al * be % N;
  i64 z0 = (d2 * de % N * y[0] + (N - 3 * ga * d2 % N) * y[1] + 3 * c2 * de % N * y[2] + (N - c2 * ga % N) * y[3]) % N;
  i64 z1 = ((N - be * d2 % N) * y[0] + (al * d2 + 2 * be * cd) % N * y[1] + (N - (be * c2 + 2 * al * cd) % N) * y[2] +
            al * c2 % N * y[3]) % N;
  i64 z2 = (b2 * de % N * y[0] + (N - (b2 * ga + 2 * ab * de) % N) * y[1] + (a2 * de + 2 * ab * ga) % N * y[2] +
            (N - a2 * ga % N) * y[3]) % N;
  i64 z3 = ((N - b2 * be % N) * y[0] + 3 * al * b2 % N * y[1] + (N - 3 * a2 * be % N) * y[2] + a2 * al % N * y[3]) % N;
  return {z0 * dinv % N, z1 * dinv % N, z2 * dinv % N, z3 * dinv % N};
}

// Discriminant P(x); P(g x) = det(g)^2 P(x).
template <class T>
T disc(const FormT<T>& x) {
  const T &a = x[0], &b = x[1], &c = x[2], &d = x[3];
  return b * b * c * c + 18 * a * b * c * d - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d;
}

// 128-bit discriminant for i64 forms (exact while |x_i| < 10^8).
i128 disc128(const Form& x);
BigInt disc_big(const Form& x);
i64 disc_mod(const Form& x, i64 N);

// Dual discriminant P*(y); P(iota(y)) = 27 P*(y).
template <class T>
T dual_disc(const DualFormT<T>& y) {
  const T &a = y[0], &b = y[1], &c = y[2], &d = y[3];
  return 3 * b * b * c * c + 6 * a * b * c * d - 4 * a * c * c * c - 4 * b * b * b * d - a * a * d * d;
}
i128 dual_disc128(const DualForm& y);
i64 dual_disc_mod(const DualForm& y, i64 N);

// Canonical pairing [x, y] = sum x_i y_i.
i128 pairing(const Form& x, const DualForm& y);
i64 pairing_mod(const Form& x, const DualForm& y, i64 N);

// iota(y) = (y4, -3y3, 3y2, -y1): V* -> V.
Form iota(const DualForm& y);
// Inverse of iota mod N; requires 3 to be a unit mod N.
DualForm iota_inverse_mod(const Form& x, i64 N);
// Bilinear form on V induced by iota: [x, x'] = x4x1' - x3x2'/3 + x2x3'/3 - x1x4' mod N.
i64 bilinear_V_mod(const Form& x, const Form& xp, i64 N);

// Hessian covariant (A, B, C) with A u^2 + B uv + C v^2 and B^2 - 4AC = -3 P(x).
struct Quadratic {
  i64 A, B, C;
  bool operator==(const Quadratic&) const = default;
};
Quadratic hessian(const Form& x);

// Cubic ring with basis (1, w, t); mult[i][j] = coordinates of e_i e_j.
struct CubicRing {
  std::array<std::array<std::array<i64, 3>, 3>, 3> mult{};
  bool is_commutative() const;
  bool is_associative() const;
  // Discriminant of the trace form det(Tr(e_i e_j)).
  i128 discriminant() const;
};
CubicRing delone_faddeev(const Form& x);

// Value x(u, v) over Z.
i128 evaluate(const Form& x, i64 u, i64 v);
i64 evaluate_mod(const Form& x, i64 u, i64 v, i64 N);

}  // namespace bcf
