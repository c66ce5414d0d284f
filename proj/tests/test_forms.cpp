#include <random>

#include "bcf/errors.hpp"
#include "bcf/forms.hpp"
#include "doctest.h"

using namespace bcf;

namespace {

Mat2 random_gl2z(std::mt19937_64& rng) {
  // Random word in the generators of GL2(Z).
  const Mat2 gens[] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {0, -1, 1, 0}, {0, 1, 1, 0}, {1, 0, 1, 1}};
  Mat2 g;
  int len = static_cast<int>(rng() % 6);
  for (int i = 0; i < len; ++i) g = g * gens[rng() % 5];
  return g;
}

Mat2 random_gl2_mod(std::mt19937_64& rng, i64 N) {
  while (true) {
    Mat2 g{static_cast<i64>(rng() % N), static_cast<i64>(rng() % N), static_cast<i64>(rng() % N),
           static_cast<i64>(rng() % N)};
    if (invertible_mod(g, N)) return g;
  }
}

Form random_form(std::mt19937_64& rng, i64 bound) {
  auto r = [&] { return static_cast<i64>(rng() % (2 * bound + 1)) - bound; };
  return {r(), r(), r(), r()};
}

}  // namespace

TEST_SUITE("forms_core") {
  TEST_CASE("swap matrix reverses and negates coefficients") {
    Form x{1, 2, 3, 4};
    CHECK(act(Mat2{0, 1, 1, 0}, x) == Form{-4, -3, -2, -1});
  }

  TEST_CASE("action agrees with direct substitution at sample points") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
      Mat2 g = random_gl2z(rng);
      Form x = random_form(rng, 9);
      Form y = act(g, x);
      for (i64 u = -2; u <= 2; ++u)
        for (i64 v = -2; v <= 2; ++v)
          CHECK(evaluate(y, u, v) * g.det() == evaluate(x, g.a * u + g.c * v, g.b * u + g.d * v));
    }
  }

  TEST_CASE("explicit 4x4 matrices match the action over Z and Z/N") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 100; ++it) {
      Mat2 g = random_gl2z(rng);
      Form x = random_form(rng, 20);
      Eigen::Matrix<i64, 4, 1> v(x[0], x[1], x[2], x[3]);
      Eigen::Matrix<i64, 4, 1> w = action_matrix(g) * v * g.det();
      CHECK(act(g, x) == Form{w(0), w(1), w(2), w(3)});
      DualForm y{x[3], x[1], x[0], x[2]};
      Eigen::Matrix<i64, 4, 1> z = dual_action_matrix(g) * Eigen::Matrix<i64, 4, 1>(y[0], y[1], y[2], y[3]) * g.det();
      CHECK(act_dual(g, y) == DualForm{z(0), z(1), z(2), z(3)});
    }
  }

  TEST_CASE("left action composes") {
    std::mt19937_64 rng(3);
    for (int it = 0; it < 200; ++it) {
      Mat2 g = random_gl2z(rng), h = random_gl2z(rng);
      Form x = random_form(rng, 6);
      CHECK(act(g, act(h, x)) == act(g * h, x));
      DualForm y{x[0], x[1], x[2], x[3]};
      CHECK(act_dual(g, act_dual(h, y)) == act_dual(g * h, y));
      for (i64 N : {5, 12, 49}) {
        Mat2 a = random_gl2_mod(rng, N), b = random_gl2_mod(rng, N);
        Form xr = reduce(x, N);
        CHECK(act_mod(a, act_mod(b, xr, N), N) == act_mod(mat_mul_mod(a, b, N), xr, N));
      }
    }
  }

  TEST_CASE("fast modular actions agree with the checked ones") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 2000; ++it) {
      i64 N = 2 + static_cast<i64>(rng() % 200);
      Mat2 g = random_gl2_mod(rng, N);
      i64 dinv = inverse_mod(g.det(), N);
      Form x = reduce(random_form(rng, 1000), N);
      DualForm y{x[2], x[0], x[3], x[1]};
      CHECK(act_mod_fast(g, dinv, x, N) == act_mod(g, x, N));
      CHECK(act_dual_mod_fast(g, dinv, y, N) == act_dual_mod(g, y, N));
    }
  }

  TEST_CASE("discriminant is covariant of weight det^2") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 300; ++it) {
      Mat2 g = random_gl2z(rng);
      Form x = random_form(rng, 50);
      CHECK(disc128(act(g, x)) == disc128(x));
      i64 N = 2 + static_cast<i64>(rng() % 60);
      Mat2 h = random_gl2_mod(rng, N);
      i64 d = mod(h.det(), N);
      CHECK(disc_mod(act_mod(h, x, N), N) == mulmod(mulmod(d, d, N), disc_mod(x, N), N));
    }
  }

  TEST_CASE("dual action is adjoint to the twisted action") {
    // [x, g*y] = [(det g) (g^{-1} . x), y].
    std::mt19937_64 rng(13);
    for (int it = 0; it < 300; ++it) {
      i64 N = 2 + static_cast<i64>(rng() % 80);
      Mat2 g = random_gl2_mod(rng, N);
      Form x = reduce(random_form(rng, 100), N);
      DualForm y = reduce(DualForm{static_cast<i64>(rng() % N), static_cast<i64>(rng() % N),
                                   static_cast<i64>(rng() % N), static_cast<i64>(rng() % N)},
                          N);
      i64 d = mod(g.det(), N), di = inverse_mod(d, N);
      Mat2 ginv{mulmod(g.d, di, N), mulmod(-g.b, di, N), mulmod(-g.c, di, N), mulmod(g.a, di, N)};
      CHECK(mat_mul_mod(g, ginv, N) == Mat2{1 % N, 0, 0, 1 % N});
      Form ax = act_mod(ginv, x, N);
      for (int i = 0; i < 4; ++i) ax[i] = mulmod(ax[i], d, N);
      CHECK(pairing_mod(x, act_dual_mod(g, y, N), N) == pairing_mod(ax, y, N));
      CHECK(dual_disc_mod(act_dual_mod(g, y, N), N) == mulmod(mulmod(d, d, N), dual_disc_mod(y, N), N));
    }
  }

  TEST_CASE("iota is equivariant and scales the discriminant by 27") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 200; ++it) {
      Mat2 g = random_gl2z(rng);
      Form f = random_form(rng, 30);
      DualForm y{f[0], f[1], f[2], f[3]};
      CHECK(iota(act_dual(g, y)) == act(g, iota(y)));
      CHECK(disc128(iota(y)) == 27 * dual_disc128(y));
    }
  }

  TEST_CASE("bilinear form on V via iota") {
    std::mt19937_64 rng(19);
    for (i64 N : {5, 7, 25, 49, 20}) {
      for (int it = 0; it < 100; ++it) {
        Form x = reduce(random_form(rng, 100), N), xp = reduce(random_form(rng, 100), N);
        i64 lhs = mulmod(3, bilinear_V_mod(x, xp, N), N);
        i64 rhs = mod(3 * x[3] * xp[0] - x[2] * xp[1] + x[1] * xp[2] - 3 * x[0] * xp[3], N);
        CHECK(lhs == rhs);
        CHECK(iota_inverse_mod(reduce(iota(iota_inverse_mod(x, N)), N), N) == iota_inverse_mod(x, N));
        CHECK(reduce(iota(iota_inverse_mod(x, N)), N) == x);
      }
    }
    CHECK_THROWS_AS(iota_inverse_mod(Form{1, 0, 0, 0}, 9), UnsupportedRing);
  }

  TEST_CASE("Delone-Faddeev ring is a commutative ring with discriminant P(x)") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 200; ++it) {
      Form x = random_form(rng, 25);
      CubicRing R = delone_faddeev(x);
      CHECK(R.is_commutative());
      CHECK(R.is_associative());
      CHECK(R.discriminant() == disc128(x));
    }
  }

  TEST_CASE("Hessian discriminant") {
    std::mt19937_64 rng(29);
    for (int it = 0; it < 200; ++it) {
      Form x = random_form(rng, 40);
      Quadratic h = hessian(x);
      CHECK(static_cast<i128>(h.B) * h.B - 4 * static_cast<i128>(h.A) * h.C == -3 * disc128(x));
    }
  }

  TEST_CASE("arbitrary precision instantiation") {
    BigInt big = BigInt(1) << 70;
    BigForm x{big, -3 * big, big + 1, 5};
    Mat2T<BigInt> g{2, 1, 1, 1};
    BigForm y = act(g, x);
    CHECK(disc(y) == disc(x));
    Form small{3, -7, 11, 2};
    CHECK(disc_big(small) == BigInt(static_cast<long long>(disc128(small))));
  }

  TEST_CASE("invalid group elements are rejected") {
    CHECK_THROWS_AS(act(Mat2{2, 0, 0, 1}, Form{1, 0, 0, 0}), InvalidGroupElement);
    CHECK_THROWS_AS(act_mod(Mat2{5, 0, 0, 1}, Form{1, 0, 0, 0}, 25), InvalidGroupElement);
    CHECK_NOTHROW(act_mod(Mat2{2, 0, 0, 1}, Form{1, 0, 0, 0}, 25));
  }
}
