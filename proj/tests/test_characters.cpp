#include <random>
#include <set>

#include "bcf/characters.hpp"
#include "bcf/errors.hpp"
#include "doctest.h"

using namespace bcf;

TEST_SUITE("residue_rings") {
  TEST_CASE("cyclotomic polynomials and exact zero tests") {
    CHECK(cyclotomic_polynomial(12) == std::vector<i64>{1, 0, -1, 0, 1});
    CHECK(cyclotomic_polynomial(9) == std::vector<i64>{1, 0, 0, 1, 0, 0, 1});
    for (i64 M : {1, 2, 6, 15, 35, 49}) {
      CyclotomicSum s(M);
      for (i64 k = 0; k < M; ++k) s.add(k);
      CHECK(s.equals_integer(M == 1 ? 1 : 0));
    }
    CyclotomicSum a(5);
    a.add(1, 3);
    CHECK((a.embed(15) - a).is_zero());
    CHECK((a * a.conj()).equals_integer(9));
    CHECK(CyclotomicSum::integer(7, 4).equals_fraction(Rational(1, 2), 8));
  }

  TEST_CASE("character group has phi(m) elements and the orthogonality relations") {
    for (i64 m : {1, 2, 4, 8, 9, 15, 16, 21, 27, 45, 63, 91}) {
      auto chars = DirichletCharacter::all(m);
      CHECK(static_cast<i64>(chars.size()) == euler_phi(m));
      std::set<std::vector<i64>> tables;
      for (const auto& chi : chars) {
        std::vector<i64> t;
        CyclotomicSum s(chi.value_order());
        for (i64 x = 0; x < m; ++x) {
          t.push_back(chi.exponent(x));
          if (chi.exponent(x) >= 0) s.add(chi.exponent(x));
          for (i64 y = 0; y < m; y += 3) {
            auto vx = chi.value(x), vy = chi.value(y), vxy = chi.value(x * y);
            if (vx && vy) CHECK(*vxy == *vx * *vy);
          }
        }
        tables.insert(t);
        CHECK(s.equals_integer(chi.is_trivial() ? euler_phi(m) : 0));
      }
      CHECK(tables.size() == chars.size());
    }
  }

  TEST_CASE("number of primitive characters") {
    for (i64 m : {3, 4, 8, 9, 12, 16, 25, 27, 45, 63}) {
      i64 expected = 0;
      for (i64 d : divisors(m)) expected += mobius(m / d) * euler_phi(d);
      i64 got = 0;
      for (const auto& chi : DirichletCharacter::all(m)) got += chi.is_primitive();
      CHECK(got == expected);
    }
  }

  TEST_CASE("primitive core agrees on units and Gauss sums have absolute value sqrt(conductor)") {
    for (i64 m : {7, 9, 12, 35, 63}) {
      for (const auto& chi : DirichletCharacter::all(m)) {
        auto prim = chi.primitive();
        CHECK(m % prim.modulus() == 0);
        for (i64 t = 1; t < m; ++t)
          if (gcd(t, m) == 1) CHECK(*chi.value(t) == *prim.value(t));
        CyclotomicSum tau = gauss_sum(prim);
        CHECK((tau * tau.conj()).equals_integer(prim.modulus()));
      }
    }
  }

  TEST_CASE("cubic Jacobi sum equals tau^3 / p") {
    for (i64 p : {7, 13, 19, 31}) {
      for (const auto& chi : DirichletCharacter::all(p)) {
        if (chi.order() != 3) continue;
        CyclotomicSum tau = gauss_sum(chi);
        CyclotomicSum J = jacobi_sum(chi, chi);
        CHECK(equal(tau * tau * tau, J * p));
        // tau(chi) tau(chi^2) = chi(-1) p = p for cubic chi.
        CHECK((tau * gauss_sum(chi.pow(2))).equals_integer(p));
      }
    }
  }

  TEST_CASE("p-adic lift is multiplicative and uses the prime-to-p part at p") {
    std::mt19937_64 rng(1);
    for (i64 m : {63, 91, 7 * 9 * 13}) {
      for (const auto& chi : DirichletCharacter::all(m)) {
        for (const auto& pp : factorize(m)) {
          i64 p = pp.p;
          for (int it = 0; it < 10; ++it) {
            i64 u1 = 1 + static_cast<i64>(rng() % (pp.q - 1)), u2 = 1 + static_cast<i64>(rng() % (pp.q - 1));
            if (u1 % p == 0 || u2 % p == 0) continue;
            int o1 = static_cast<int>(rng() % 3), o2 = static_cast<int>(rng() % 3);
            PadicUnitClass y1{p, o1, u1, pp.e}, y2{p, o2, u2, pp.e}, y12{p, o1 + o2, u1 * u2 % pp.q, pp.e};
            CHECK(lift_chi_p(chi, y12) == lift_chi_p(chi, y1) * lift_chi_p(chi, y2));
          }
          auto rest = chi.primitive().prime_to_p_part(p);
          CHECK(chi_tilde_at_p(chi, p) == rest.value(p)->inverse());
        }
      }
    }
    auto chi = DirichletCharacter::all(9)[1];
    CHECK_THROWS_AS(lift_chi_p(chi, PadicUnitClass{3, 0, 2, 1}), DomainError);
  }

  TEST_CASE("CRT split and combine are inverse") {
    std::mt19937_64 rng(2);
    std::vector<i64> mods{3, 5, 7};
    for (int it = 0; it < 50; ++it) {
      Form x{static_cast<i64>(rng() % 105), static_cast<i64>(rng() % 105), static_cast<i64>(rng() % 105),
             static_cast<i64>(rng() % 105)};
      CHECK(crt_combine(crt_split(x, mods), mods) == x);
    }
    CHECK_THROWS_AS(inverse_mod(6, 9), DomainError);
  }
}
