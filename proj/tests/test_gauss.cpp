#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bcf/errors.hpp"
#include "bcf/gauss.hpp"

using namespace bcf;

namespace {

// Floating-point W straight from the definition, through the checked actions.
std::complex<double> naive_W(const DirichletCharacter& chi, const Form& a, const DualForm& b, i64 N) {
  std::complex<double> s = 0;
  for_each_group_element(N, [&](const Mat2& g, i64 det) {
    double ang = 2 * std::numbers::pi * static_cast<double>(pairing_mod(act_mod(g, a, N), b, N)) / static_cast<double>(N);
    s += chi(det % chi.modulus()) * std::polar(1.0, ang);
  });
  return s;
}

void require_pass(const VerificationReport& r) {
  INFO(r.failure_listing());
  CHECK(r.passed());
}

}  // namespace

TEST_SUITE("gauss_fourier") {
  TEST_CASE("W at b = 0 is the group order") {
    for (i64 N : {4, 5, 9}) {
      auto W = orbital_gauss_sum(DirichletCharacter::trivial(N), {1, 2, 0, 3}, {0, 0, 0, 0}, N);
      CHECK(W.equals_integer(group_order(N)));
    }
  }

  TEST_CASE("histogram sums match the floating definition") {
    std::mt19937_64 rng(3);
    for (i64 N : {5, 6, 9}) {
      for (const auto& chi : DirichletCharacter::all(N)) {
        Form a = random_form(N, rng), b = random_form(N, rng);
        DualForm y{b[0], b[1], b[2], b[3]};
        auto W = orbital_gauss_sum(chi, a, y, N);
        CHECK(std::abs(W.value() - naive_W(chi, a, y, N)) < 1e-7);
      }
    }
  }

  TEST_CASE("threaded and serial sums agree") {
    std::vector<DualForm> bs{{1, 2, 3, 4}, {0, 1, 0, 0}};
    auto chi = DirichletCharacter::all(7)[2];
    auto a = orbital_gauss_sums(chi, {1, 0, 2, 5}, bs, 7, 1);
    auto b = orbital_gauss_sums(chi, {1, 0, 2, 5}, bs, 7, 3);
    for (std::size_t j = 0; j < bs.size(); ++j) CHECK(equal(a[j], b[j]));
  }

  TEST_CASE("spot values from the tables") {
    auto one5 = DirichletCharacter::trivial(5);
    Form t3;
    for (i64 i = 0; i < 625; ++i)
      if (type_mod_p(form_at(i, 5), 5) == TypeSymbol::T3) {
        t3 = form_at(i, 5);
        break;
      }
    CHECK(orbital_gauss_sums_V(one5, {1, 0, 0, 0}, {t3}, 5)[0].equals_integer(-120));
    CHECK(orbital_gauss_sums_V(one5, {1, 0, 0, 0}, {{0, 0, 0, 0}}, 5)[0].equals_integer(480));
    auto one7 = DirichletCharacter::trivial(7);
    CHECK(orbital_gauss_sums_V(one7, {0, 1, 0, 0}, {{0, 1, 1, 0}}, 7)[0].equals_integer(-126));
    auto one25 = DirichletCharacter::trivial(25);
    CHECK(orbital_gauss_sums_V(one25, {1, 0, 0, 0}, {{0, 1, 0, 0}}, 25)[0].equals_integer(50000));
    CHECK(orbital_gauss_sums_V(one25, {1, 0, 0, 5}, {{1, 0, 0, 0}}, 25)[0].equals_integer(-12500));
  }

  TEST_CASE("Mori table") {
    for (i64 p : {5, 7, 11}) {
      auto r = verify_mori_table(p);
      CHECK(r.cells.size() == 12);
      require_pass(r);
    }
  }

  TEST_CASE("singular table p = 5") { require_pass(verify_singular_table(5)); }

  TEST_CASE("Fourier transform of f_p") {
    for (i64 p : {2, 3, 5, 7}) require_pass(verify_fourier_fp(p));
  }

  TEST_CASE("Fourier transforms of Phi_p and Phi'_p, p = 5") {
    require_pass(verify_fourier_phi(5, false));
    require_pass(verify_fourier_phi(5, true));
    require_pass(verify_parseval(5, false));
    require_pass(verify_parseval(5, true));
  }

  TEST_CASE("indicator of the origin has constant transform") {
    FiniteFunction f(5);
    f.set_integer(0, 1);
    auto fh = fourier_transform(f);
    for (i64 b = 0; b < 625; ++b) CHECK(fh.value_equals(b, Rational(1, 625)));
  }

  TEST_CASE("Fourier inversion on random sparse functions") {
    std::mt19937_64 rng(11);
    for (i64 N : {4, 5, 9}) {
      FiniteFunction f(N);
      std::uniform_int_distribution<i64> idx(0, N * N * N * N - 1), val(-4, 4);
      for (int k = 0; k < 6; ++k) f.set_integer(idx(rng), val(rng));
      auto back = inverse_fourier_transform(fourier_transform(f));
      i64 n4 = N * N * N * N;
      for (i64 x = 0; x < n4; ++x) CHECK(equal(back.numerator(x), f.numerator(x) * back.denominator()));
    }
  }

  TEST_CASE("transform of f_{chi,a} is N^-4 W") {
    std::mt19937_64 rng(5);
    for (i64 N : {5, 7}) {
      for (const auto& chi : DirichletCharacter::all(N)) {
        Form a = random_form(N, rng);
        auto f = f_chi_a(chi, a, N);
        for (int k = 0; k < 3; ++k) {
          Form b = random_form(N, rng);
          auto W = orbital_gauss_sum(chi, a, {b[0], b[1], b[2], b[3]}, N);
          CHECK(equal(fourier_numerator(f, form_index(b, N)), W));
        }
      }
    }
  }

  TEST_CASE("identities") {
    IdentityOptions opt;
    opt.samples = 8;
    for (i64 N : {5, 7}) {
      for (const auto& chi : DirichletCharacter::all(N)) require_pass(check_equivariance(N, chi, 50, 20, opt));
    }
    require_pass(check_equivariance(25, DirichletCharacter::all(25)[3], 10, 100, opt));
    for (i64 N : {5, 7, 9}) {
      auto chars = DirichletCharacter::all(N);
      require_pass(check_inversion(N, chars[0], opt));
      require_pass(check_inversion(N, chars[1], opt));
    }
    require_pass(check_reduction(5, opt));
    require_pass(check_decomposition(3, 5, opt));
    require_pass(check_product_fourier(3, 5, opt));
    auto id = check_identities(7, DirichletCharacter::all(7)[3], opt);
    require_pass(id);
  }

  TEST_CASE("preconditions") {
    CHECK_THROWS_AS(verify_mori_table(3), DomainError);
    CHECK_THROWS_AS(orbital_gauss_sum(DirichletCharacter::trivial(7), {1, 0, 0, 0}, {0, 0, 0, 0}, 5), DomainError);
    CHECK_THROWS_AS(orbital_gauss_sum(DirichletCharacter::trivial(2), {1, 0, 0, 0}, {0, 0, 0, 0}, 128), ResourceLimit);
    FiniteFunction big(99);
    big.set_integer(1, 1);
    CHECK_THROWS_AS(fourier_transform(big), ResourceLimit);
  }
}
