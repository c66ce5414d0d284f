#include "bcf/forms.hpp"

#include "bcf/errors.hpp"

namespace bcf {

namespace detail {
void require_unimodular(i64 det) {
  if (det != 1 && det != -1)
    throw InvalidGroupElement("matrix with determinant " + std::to_string(det) + " is not in GL2(Z)");
}
}  // namespace detail

Mat2 mat_mul_mod(const Mat2& g, const Mat2& h, i64 N) {
  Mat2 r = g * h;
  return {mod(r.a, N), mod(r.b, N), mod(r.c, N), mod(r.d, N)};
}

bool invertible_mod(const Mat2& g, i64 N) { return is_unit(mod128(static_cast<i128>(g.a) * g.d - static_cast<i128>(g.b) * g.c, N), N); }

Eigen::Matrix<i64, 4, 4> action_matrix(const Mat2& g) {
  const i64 al = g.a, be = g.b, ga = g.c, de = g.d;
  Eigen::Matrix<i64, 4, 4> m;
  m << al * al * al, al * al * be, al * be * be, be * be * be,
      3 * al * al * ga, al * al * de + 2 * al * be * ga, be * be * ga + 2 * al * be * de, 3 * be * be * de,
      3 * al * ga * ga, be * ga * ga + 2 * al * ga * de, al * de * de + 2 * be * ga * de, 3 * be * de * de,
      ga * ga * ga, ga * ga * de, ga * de * de, de * de * de;
  return m;
}

Eigen::Matrix<i64, 4, 4> dual_action_matrix(const Mat2& g) {
  const i64 al = g.a, be = g.b, ga = g.c, de = g.d;
  Eigen::Matrix<i64, 4, 4> m;
  m << de * de * de, -3 * ga * de * de, 3 * ga * ga * de, -ga * ga * ga,
      -be * de * de, al * de * de + 2 * be * ga * de, -(be * ga * ga + 2 * al * ga * de), al * ga * ga,
      be * be * de, -(be * be * ga + 2 * al * be * de), al * al * de + 2 * al * be * ga, -al * al * ga,
      -be * be * be, 3 * al * be * be, -3 * al * al * be, al * al * al;
  return m;
}

Form reduce(const Form& x, i64 N) { return {mod(x[0], N), mod(x[1], N), mod(x[2], N), mod(x[3], N)}; }
DualForm reduce(const DualForm& y, i64 N) { return {mod(y[0], N), mod(y[1], N), mod(y[2], N), mod(y[3], N)}; }

namespace {

i64 det_inverse(const Mat2& g, i64 N) {
  i64 dt = mod128(static_cast<i128>(g.a) * g.d - static_cast<i128>(g.b) * g.c, N);
  if (!is_unit(dt, N)) throw InvalidGroupElement("matrix is not invertible mod " + std::to_string(N));
  return inverse_mod(dt, N);
}

Mat2T<i128> reduced128(const Mat2& g, i64 N) { return {mod(g.a, N), mod(g.b, N), mod(g.c, N), mod(g.d, N)}; }

}  // namespace

Form act_mod(const Mat2& g, const Form& x, i64 N) {
  i64 inv = det_inverse(g, N);
  std::array<i128, 4> xx{mod(x[0], N), mod(x[1], N), mod(x[2], N), mod(x[3], N)};
  auto y = detail::substitute(reduced128(g, N), xx);
  Form r;
  for (int i = 0; i < 4; ++i) r[i] = mulmod(mod128(y[i], N), inv, N);
  return r;
}

DualForm act_dual_mod(const Mat2& g, const DualForm& y, i64 N) {
  i64 inv = det_inverse(g, N);
  std::array<i128, 4> yy{mod(y[0], N), mod(y[1], N), mod(y[2], N), mod(y[3], N)};
  auto z = detail::substitute_dual(reduced128(g, N), yy);
  DualForm r;
  for (int i = 0; i < 4; ++i) r[i] = mulmod(mod128(z[i], N), inv, N);
  return r;
}

i128 disc128(const Form& x) {
  FormT<i128> y{x[0], x[1], x[2], x[3]};
  return disc(y);
}

BigInt disc_big(const Form& x) {
  BigForm y{x[0], x[1], x[2], x[3]};
  return disc(y);
}

i64 disc_mod(const Form& x, i64 N) { return mod128(disc128(reduce(x, N)), N); }

i128 dual_disc128(const DualForm& y) {
  DualFormT<i128> z{y[0], y[1], y[2], y[3]};
  return dual_disc(z);
}

i64 dual_disc_mod(const DualForm& y, i64 N) { return mod128(dual_disc128(reduce(y, N)), N); }

i128 pairing(const Form& x, const DualForm& y) {
  i128 s = 0;
  for (int i = 0; i < 4; ++i) s += static_cast<i128>(x[i]) * y[i];
  return s;
}

i64 pairing_mod(const Form& x, const DualForm& y, i64 N) { return mod128(pairing(reduce(x, N), reduce(y, N)), N); }

Form iota(const DualForm& y) { return {y[3], -3 * y[2], 3 * y[1], -y[0]}; }

DualForm iota_inverse_mod(const Form& x, i64 N) {
  if (!is_unit(3, N)) throw UnsupportedRing("iota is not invertible mod " + std::to_string(N));
  i64 t = inverse_mod(3, N);
  return reduce(DualForm{-x[3], mulmod(x[2], t, N), mulmod(-x[1], t, N), x[0]}, N);
}

i64 bilinear_V_mod(const Form& x, const Form& xp, i64 N) { return pairing_mod(x, iota_inverse_mod(xp, N), N); }

Quadratic hessian(const Form& x) {
  return {x[1] * x[1] - 3 * x[0] * x[2], x[1] * x[2] - 9 * x[0] * x[3], x[2] * x[2] - 3 * x[1] * x[3]};
}

CubicRing delone_faddeev(const Form& x) {
  const i64 a = x[0], b = x[1], c = x[2], d = x[3];
  CubicRing R;
  // e0 = 1.
  for (int i = 0; i < 3; ++i) {
    R.mult[0][i] = {0, 0, 0};
    R.mult[0][i][i] = 1;
    R.mult[i][0] = R.mult[0][i];
  }
  R.mult[1][1] = {-a * c, -b, a};
  R.mult[2][2] = {-b * d, -d, c};
  R.mult[1][2] = {-a * d, 0, 0};
  R.mult[2][1] = R.mult[1][2];
  return R;
}

bool CubicRing::is_commutative() const {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (mult[i][j] != mult[j][i]) return false;
  return true;
}

bool CubicRing::is_associative() const {
  auto product = [&](const std::array<i128, 3>& u, const std::array<i128, 3>& v) {
    std::array<i128, 3> r{0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r[k] += u[i] * v[j] * mult[i][j][k];
    return r;
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        std::array<i128, 3> ei{0, 0, 0}, ej{0, 0, 0}, ek{0, 0, 0};
        ei[i] = ej[j] = ek[k] = 1;
        if (product(product(ei, ej), ek) != product(ei, product(ej, ek))) return false;
      }
  return true;
}

i128 CubicRing::discriminant() const {
  // Trace of multiplication by e_i.
  std::array<i128, 3> tr{};
  for (int i = 0; i < 3; ++i) {
    i128 t = 0;
    for (int j = 0; j < 3; ++j) t += mult[i][j][j];
    tr[i] = t;
  }
  i128 m[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      i128 t = 0;
      for (int k = 0; k < 3; ++k) t += static_cast<i128>(mult[i][j][k]) * tr[k];
      m[i][j] = t;
    }
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

i128 evaluate(const Form& x, i64 u, i64 v) {
  i128 U = u, W = v;
  return x[0] * U * U * U + x[1] * U * U * W + x[2] * U * W * W + x[3] * W * W * W;
}

i64 evaluate_mod(const Form& x, i64 u, i64 v, i64 N) { return mod128(evaluate(reduce(x, N), mod(u, N), mod(v, N)), N); }

}  // namespace bcf
