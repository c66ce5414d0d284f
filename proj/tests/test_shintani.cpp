#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>

#include "bcf/errors.hpp"
#include "bcf/shintani.hpp"

using namespace bcf;

namespace {

const std::vector<ClassRecord>& classes(i64 X, int sign) {
  static std::map<std::pair<i64, int>, std::vector<ClassRecord>> cache;
  auto key = std::make_pair(X, sign);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, enumerate_classes(X, sign)).first;
  return it->second;
}

bool same_coeff(const CoefficientTable& s, const CoefficientTable& t, i64 n) {
  return equal(s.numerator(n) * t.den, t.numerator(n) * s.den);
}

Mat2 random_word(std::mt19937_64& rng, int len) {
  const std::array<Mat2, 4> gens{Mat2{1, 1, 0, 1}, Mat2{1, -1, 0, 1}, Mat2{0, -1, 1, 0}, Mat2{0, 1, -1, 0}};
  Mat2 g;
  std::uniform_int_distribution<int> pick(0, 3);
  for (int k = 0; k < len; ++k) g = gens[static_cast<std::size_t>(pick(rng))] * g;
  return g;
}

// Rational root test by the rational root theorem.
bool has_rational_root(const Form& x) {
  if (x[0] == 0 || x[3] == 0) return true;
  for (i64 s : divisors(std::abs(x[0])))
    for (i64 r : divisors(std::abs(x[3])))
      for (i64 sg : {1, -1})
        if (evaluate(x, sg * r, s) == 0) return true;
  return false;
}

std::array<i64, 3> traces(const CubicRing& R) {
  std::array<i64, 3> t{};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) t[static_cast<std::size_t>(j)] += R.mult[j][i][i];
  return t;
}

using Vec3 = std::array<i64, 3>;
Vec3 ring_mul(const CubicRing& R, const Vec3& u, const Vec3& v) {
  Vec3 w{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) w[static_cast<std::size_t>(k)] += u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] * R.mult[i][j][k];
  return w;
}

// Order-3 automorphism of the ring of x whose action on (w, t) mod Z is a 2x2 block built from g.
bool has_order3_automorphism(const Form& x, const Mat2& g) {
  CubicRing R = delone_faddeev(x);
  auto tr = traces(R);
  const Mat2 gi{g.d, -g.b, -g.c, g.a};
  for (const Mat2& m : {g, Mat2{g.a, g.c, g.b, g.d}, gi, Mat2{gi.a, gi.c, gi.b, gi.d}}) {
    // phi(w) = c1 + m.a w + m.b t, phi(t) = c2 + m.c w + m.d t; constants from trace preservation.
    i64 n1 = tr[1] - m.a * tr[1] - m.b * tr[2], n2 = tr[2] - m.c * tr[1] - m.d * tr[2];
    if (n1 % 3 != 0 || n2 % 3 != 0) continue;
    std::array<Vec3, 3> phi{Vec3{1, 0, 0}, Vec3{n1 / 3, m.a, m.b}, Vec3{n2 / 3, m.c, m.d}};
    auto apply = [&](const Vec3& u) {
      Vec3 w{};
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) w[static_cast<std::size_t>(k)] += u[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      return w;
    };
    bool hom = true;
    for (int i = 0; i < 3 && hom; ++i)
      for (int j = 0; j < 3 && hom; ++j) {
        Vec3 eij{R.mult[i][j][0], R.mult[i][j][1], R.mult[i][j][2]};
        hom = apply(eij) == ring_mul(R, phi[static_cast<std::size_t>(i)], phi[static_cast<std::size_t>(j)]);
      }
    if (!hom) continue;
    Vec3 w{0, 1, 0};
    Vec3 w1 = apply(w), w3 = apply(apply(w1));
    Vec3 t{0, 0, 1};
    if (w1 != w && w3 == w && apply(apply(apply(t))) == t) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("shintani_counts") {
  TEST_CASE("X = 1") {
    auto cl = enumerate_classes(1, 1);
    REQUIRE(cl.size() == 1);
    CHECK(cl[0].stabilizer == 3);
    CHECK(bfs_canonical_oracle(cl[0].rep).canonical == bfs_canonical_oracle({0, 1, 1, 0}).canonical);
    CHECK(class_number_table(cl, 1, 1).at(1) == Rational(1, 3));
    CHECK(enumerate_classes(2, -1).empty());
    auto o = bfs_canonical_oracle({0, 1, 1, 0});
    CHECK(!o.inconclusive);
    CHECK(o.stabilizer == 3);
  }

  TEST_CASE("records satisfy the contract") {
    for (int sign : {1, -1}) {
      const auto& cl = classes(2000, sign);
      for (const auto& r : cl) {
        CHECK(static_cast<i128>(r.disc) == disc128(r.rep));
        CHECK(sign * r.disc > 0);
        CHECK(sign * r.disc <= 2000);
        CHECK((r.stabilizer == 1 || r.stabilizer == 3));
        CHECK(canonicalize(r.rep).rep == r.rep);
      }
      if (sign < 0)
        for (const auto& r : cl) CHECK(r.stabilizer == 1);
    }
  }

  TEST_CASE("oracle is orbit invariant") {
    std::mt19937_64 rng(2);
    const auto& cl = classes(200, 1);
    const auto& cm = classes(200, -1);
    std::uniform_int_distribution<std::size_t> pp(0, cl.size() - 1), pm(0, cm.size() - 1);
    std::uniform_int_distribution<int> len(0, 6);
    for (int k = 0; k < 1000; ++k) {
      const Form& x = (k % 2 ? cl[pp(rng)] : cm[pm(rng)]).rep;
      Form y = act(random_word(rng, len(rng)), x);
      auto ox = bfs_canonical_oracle(x), oy = bfs_canonical_oracle(y);
      REQUIRE(!ox.inconclusive);
      REQUIRE(!oy.inconclusive);
      CHECK(ox.canonical == oy.canonical);
      CHECK(canonicalize(y).rep == x);
    }
  }

  TEST_CASE("classes are pairwise inequivalent and stabilizers agree with the oracle") {
    for (int sign : {1, -1}) {
      std::set<std::pair<i64, Form>> seen;
      bool repeated_disc = false;
      i64 last = 0;
      for (const auto& r : classes(300, sign)) {
        auto o = bfs_canonical_oracle(r.rep);
        REQUIRE(!o.inconclusive);
        CHECK(o.stabilizer == r.stabilizer);
        CHECK(seen.emplace(r.disc, o.canonical).second);
        repeated_disc |= r.disc == last;
        last = r.disc;
      }
      CHECK(repeated_disc);
    }
  }

  TEST_CASE("every form in a box lies in an enumerated class") {
    const i64 X = 2000;
    std::set<Form> reps[2];
    for (int s = 0; s < 2; ++s)
      for (const auto& r : classes(X, s == 0 ? 1 : -1)) reps[s].insert(r.rep);
    i64 tested = 0;
    for (i64 a = -3; a <= 3; ++a)
      for (i64 b = -3; b <= 3; ++b)
        for (i64 c = -3; c <= 3; ++c)
          for (i64 d = -3; d <= 3; ++d) {
            Form x{a, b, c, d};
            i128 D = disc128(x);
            if (D == 0 || D > X || D < -X) continue;
            ++tested;
            Canonical k = canonicalize(x);
            CHECK(reps[D > 0 ? 0 : 1].count(k.rep) == 1);
            if (tested % 50 == 0) CHECK(bfs_canonical_oracle(x).canonical == bfs_canonical_oracle(k.rep).canonical);
          }
    CHECK(tested > 1000);
  }

  TEST_CASE("Ohno-Nakagawa relations up to 2000") {
    const i64 X = 2000;
    auto hp = class_number_table(classes(X, 1), X, 1), hm = class_number_table(classes(X, -1), X, -1);
    EnumerateOptions o;
    o.flags = false;
    auto dp = dual_class_number_table(X, 1, o), dm = dual_class_number_table(X, -1, o);
    int bad = 0;
    for (i64 n = 1; n <= X; ++n) {
      bad += dp.at(n) != hm.at(n);
      bad += dm.at(n) != 3 * hp.at(n);
    }
    CHECK(bad == 0);
    CHECK(hp.total() > 0);
  }

  TEST_CASE("reducibility flag") {
    for (int sign : {1, -1})
      for (const auto& r : classes(2000, sign)) CHECK(r.reducible == has_rational_root(r.rep));
    CHECK(!is_reducible({1, 0, 0, -2}));
    CHECK(is_reducible({2, -3, -3, 2}));
  }

  TEST_CASE("maximality flags") {
    for (int sign : {1, -1})
      for (const auto& r : classes(2000, sign))
        for (std::size_t i = 0; i < kMaximalityPrimes.size(); ++i) {
          i64 p = kMaximalityPrimes[i];
          bool bit = (r.maximal_mask >> i) & 1;
          if (r.disc % (p * p) != 0) CHECK(bit);
          // Imprimitive forms give non-maximal rings.
          if (mod(r.rep[0], p) == 0 && mod(r.rep[1], p) == 0 && mod(r.rep[2], p) == 0 && mod(r.rep[3], p) == 0)
            CHECK(!bit);
        }
  }

  TEST_CASE("stabilizer 3 classes carry an order-3 ring automorphism") {
    int count = 0;
    for (const auto& r : classes(2000, 1)) {
      if (r.stabilizer != 3) continue;
      ++count;
      std::optional<Mat2> g;
      for (i64 a = -2; a <= 2 && !g; ++a)
        for (i64 b = -2; b <= 2 && !g; ++b)
          for (i64 c = -2; c <= 2 && !g; ++c)
            for (i64 d = -2; d <= 2 && !g; ++d) {
              Mat2 m{a, b, c, d};
              if (m.det() == 1 && !(m == Mat2{}) && act(m, r.rep) == r.rep) g = m;
            }
      REQUIRE(g);
      CHECK(has_order3_automorphism(r.rep, *g));
    }
    CHECK(count > 5);
  }

  TEST_CASE("weighted coefficients") {
    const auto& cl = classes(500, 1);
    auto h = class_number_table(cl, 500, 1);
    FiniteFunction one(1);
    one.set_integer(0, 1);
    auto t1 = weighted_coeffs(cl, one);
    for (i64 n = 1; n <= 500; ++n) CHECK(t1.equals(n, h.at(n)));

    auto f5 = divisible_coeffs(cl, 5);
    for (i64 n = 1; n <= 500; ++n) CHECK(f5.equals(n, n % 5 == 0 ? h.at(n) : Rational(0)));

    auto th = theta_coeffs(cl, 6);
    for (i64 n = 1; n <= 500; ++n) {
      i64 w = 0;
      for (i64 m : divisors(gcd(6, n))) w += mobius(m) * m;
      CHECK(th.equals(n, h.at(n) * w));
    }
  }

  TEST_CASE("partial zeta through the character average") {
    for (int sign : {1, -1}) {
      const auto& cl = classes(500, sign);
      const Form a{1, 0, 0, 0};
      auto direct = partial_zeta_coeffs(cl, a, 5);
      auto chars = partial_zeta_via_characters(cl, a, 5);
      for (i64 n = 1; n <= 500; ++n) CHECK(same_coeff(direct, chars, n));
      CHECK(!direct.c.empty());
    }
  }

  TEST_CASE("twisted coefficients") {
    const auto& cl = classes(500, -1);
    auto h = class_number_table(cl, 500, -1);
    auto chi = DirichletCharacter::trivial(7);
    auto t = twisted_coeffs(cl, 2, chi);
    for (i64 n = 1; n <= 500; ++n)
      CHECK(t.equals(n, (n % 2 == 0 && (n / 2) % 7 != 0) ? h.at(n) : Rational(0)));
    auto quad = DirichletCharacter::all(3)[1];
    auto tq = twisted_coeffs(cl, 1, quad);
    // P is negative, so the weight at n is chi(-n).
    for (i64 n = 1; n <= 500; ++n) {
      Rational want = n % 3 == 0 ? Rational(0) : (mod(-n, 3) == 1 ? h.at(n) : -h.at(n));
      CHECK(tq.equals(n, want));
    }
  }

  TEST_CASE("non-invariant weight is rejected") {
    FiniteFunction f(5);
    f.set_integer(form_index({1, 0, 0, 0}, 5), 1);
    CHECK_THROWS_AS(weighted_coeffs(classes(50, 1), f), ContractViolation);
  }

  TEST_CASE("progression sums") {
    auto h = class_number_table(classes(2000, 1), 2000, 1);
    for (i64 N : {3, 4, 7}) {
      Rational s(0);
      for (i64 a = 0; a < N; ++a) s += progression_partial_sum(h, N, a, 2000);
      CHECK(s == progression_partial_sum(h, 1, 0, 2000));
      CHECK(s == h.total());
      Rational prev(0);
      for (i64 X = 100; X <= 2000; X += 100) {
        Rational cur = progression_partial_sum(h, N, 1, X);
        CHECK(cur >= prev);
        prev = cur;
      }
    }
    CHECK_THROWS_AS(progression_partial_sum(h, 3, 1, 3000), DomainError);
  }

  TEST_CASE("persistence") {
    auto dir = std::filesystem::temp_directory_path() / "bcf_shintani_test";
    std::filesystem::create_directories(dir);
    std::string prefix = (dir / "neg300").string();
    save_classes(classes(300, -1), 300, -1, prefix);
    i64 X = 0;
    int sign = 0;
    CHECK(load_classes(prefix, &X, &sign) == classes(300, -1));
    CHECK(X == 300);
    CHECK(sign == -1);
    auto t = class_number_table(classes(300, -1), 300, -1);
    auto back = table_from_json(nlohmann::json::parse(table_to_json(t).dump()));
    CHECK(back.h == t.h);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("preconditions") {
    CHECK_THROWS_AS(enumerate_classes(2'000'000, 1), ResourceLimit);
    CHECK_THROWS_AS(enumerate_classes(0, 1), DomainError);
    CHECK_THROWS_AS(reduce_form({1, 0, 0, 0}), DomainError);
    CHECK_THROWS_AS(bfs_canonical_oracle({0, 0, 1, 0}), DomainError);
  }

  TEST_CASE("threaded enumeration matches serial") {
    EnumerateOptions o;
    o.threads = 3;
    for (int sign : {1, -1}) CHECK(enumerate_classes(3000, sign, o) == enumerate_classes(3000, sign));
  }
}
