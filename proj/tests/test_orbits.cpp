#include <map>
#include <random>
#include <set>

#include "bcf/errors.hpp"
#include "bcf/orbits.hpp"
#include "doctest.h"

using namespace bcf;

TEST_SUITE("orbit_atlas") {
  TEST_CASE("group order matches enumeration") {
    for (i64 N : {2, 3, 4, 5, 6, 8, 9, 10, 12}) {
      i64 count = 0;
      for_each_group_element(N, [&](const Mat2&, i64) { ++count; });
      CHECK(count == group_order(N));
    }
    CHECK(group_order(27) == 314928);
  }

  TEST_CASE("types mod p are exactly the G_p-orbits") {
    // Oracle: explicit orbit partition of V_p under generators of GL2(F_p).
    for (i64 p : {2, 3, 5, 7, 11}) {
      OrbitPartition part(p);
      CHECK(part.orbit_count() == 6);
      std::map<std::int32_t, std::set<TypeSymbol>> types;
      for (i64 i = 0; i < p * p * p * p; ++i) types[part.orbit_of(i)].insert(type_mod_p(form_at(i, p), p));
      std::set<TypeSymbol> all;
      for (const auto& [oid, ts] : types) {
        CHECK(ts.size() == 1);
        all.insert(*ts.begin());
        CHECK(part.orbits()[static_cast<std::size_t>(oid)].size == closed_form_count(*ts.begin(), p, 1));
      }
      CHECK(all.size() == 6);
    }
  }

  TEST_CASE("stabilizers mod p") {
    for (i64 p : {5, 7, 11}) {
      CHECK(stabilizer_order(Form{0, 1, 0, 0}, p, 1) == p - 1);
      CHECK(stabilizer_order(Form{1, 0, 0, 0}, p, 1) == (p - 1) * p);
      CHECK(stabilizer_order(Form{0, 1, 1, 0}, p, 1) == 6);
      CHECK(stabilizer_order(Form{0, 0, 0, 0}, p, 1) == group_order(p));
      for (const auto& c : orbit_split(p, TypeSymbol::T3, 1)) CHECK(c.stabilizer == 3);
      for (const auto& c : orbit_split(p, TypeSymbol::T21, 1)) CHECK(c.stabilizer == 2);
    }
    // Stabilizer of (1,0,0,0) is upper triangular (t x; 0 t^2).
    for (const auto& g : stabilizer(Form{1, 0, 0, 0}, 7, 1)) {
      CHECK(g.c == 0);
      CHECK(g.d == g.a * g.a % 7);
    }
  }

  TEST_CASE("recursive-lift stabilizer agrees with a full scan") {
    std::mt19937_64 rng(4);
    for (auto [p, e] : std::vector<std::pair<i64, int>>{{2, 2}, {3, 2}, {5, 2}, {2, 3}, {3, 3}}) {
      i64 q = ipow(p, e);
      for (int it = 0; it < 6; ++it) {
        Form a{static_cast<i64>(rng() % q), static_cast<i64>(rng() % q), static_cast<i64>(rng() % q),
               static_cast<i64>(rng() % q)};
        if (it == 0) a = {1, 0, 0, 0};
        if (it == 1) a = {0, 1, 0, p};
        CHECK(stabilizer_order(a, p, e) == stabilizer_order_scan(a, q));
      }
    }
  }

  TEST_CASE("stabilizers of singular normal forms mod p^2") {
    for (i64 p : {5, 7, 11, 13}) {
      i64 p2 = p * p;
      CHECK(stabilizer_order(Form{0, 1, 0, 0}, p, 2) == p2 - p);
      CHECK(stabilizer_order(Form{0, 1, 0, p}, p, 2) == 2 * p);
      CHECK(stabilizer_order(Form{1, 0, 0, 0}, p, 2) == p2 * (p2 - p));
      CHECK(stabilizer_order(Form{1, 0, p, 0}, p, 2) == 2 * p * p2);
      CHECK(stabilizer_order(Form{1, 0, 0, p}, p, 2) == (p % 3 == 1 ? 3 * p2 : p2));
    }
  }

  TEST_CASE("census reproduces the closed-form counts") {
    for (i64 p : {2, 3, 5}) {
      for (int e : {1, 2}) {
        auto c = census(p, e);
        for (const auto& [s, entry] : c) {
          INFO("p=" << p << " e=" << e << " symbol " << symbol_name(s));
          CHECK(entry.match);
        }
      }
    }
  }

  TEST_CASE("valuation criteria agree with D-set orbit closures at p = 5") {
    TypeClassifier val(5, TypeClassifier::Method::Valuation);
    TypeClassifier orb(5, TypeClassifier::Method::OrbitClosure);
    i64 q = 25;
    for (i64 i = 0; i < q * q * q * q; ++i) {
      Form a = form_at(i, q);
      if (val.level2(a) != orb.level2(a)) {
        FAIL("classifiers disagree at " << a);
      }
    }
  }

  TEST_CASE("types mod p^2 are unions of orbits and D-sets classify themselves") {
    for (i64 p : {2, 3, 5}) {
      TypeClassifier cls(p);
      i64 q = p * p;
      const auto& part = shared_partition(q);
      std::map<std::int32_t, TypeSymbol> t;
      for (i64 i = 0; i < q * q * q * q; ++i) {
        Form a = form_at(i, q);
        TypeSymbol s = cls.level2(a);
        auto [it, fresh] = t.emplace(part.orbit_of(i), s);
        if (!fresh) CHECK(it->second == s);
        for (auto d : {TypeSymbol::T1_2_1max, TypeSymbol::T1_2_1star, TypeSymbol::T1_3max, TypeSymbol::T1_3star,
                       TypeSymbol::T1_3starstar})
          if (in_D_set(d, a, p)) CHECK(s == d);
      }
    }
  }

  TEST_CASE("orbit splitting mod p^2") {
    for (i64 p : {5, 7}) {
      CHECK(orbit_split(p, TypeSymbol::T1_2_1max).size() == 2);
      CHECK(orbit_split(p, TypeSymbol::T1_3star).size() == 2);
      CHECK(orbit_split(p, TypeSymbol::T1_3max).size() == (p % 3 == 1 ? 3u : 1u));
      CHECK(orbit_split(p, TypeSymbol::T1_2_1star).size() == 1);
      CHECK(orbit_split(p, TypeSymbol::T1_3starstar).size() == 1);
      CHECK(orbit_split(p, TypeSymbol::T3).size() == 1);
      CHECK(orbit_split(p, TypeSymbol::TpV).size() == 6);
    }
    // At p = 2 the type (1^21*) has a second orbit through (0,1,2,0).
    auto two = orbit_split(2, TypeSymbol::T1_2_1star);
    CHECK(two.size() == 2);
  }

  TEST_CASE("stabilizers of the mod 27 representatives") {
    auto rows = g27_stabilizer_table();
    CHECK(rows.size() == 9);
    i64 sum = 0;
    for (const auto& r : rows) {
      INFO(r.rep);
      CHECK(r.stabilizer == r.expected);
      sum += group_order(27) / r.stabilizer;
    }
    // The nine orbits fill the preimage of V_9(1^3max).
    CHECK(sum == 81 * closed_form_count(TypeSymbol::T1_3max, 3, 2));
    const auto& part = shared_partition(27);
    std::set<std::int32_t> ids;
    for (const auto& r : rows) ids.insert(part.orbit_of(form_index(r.rep, 27)));
    CHECK(ids.size() == 9);
  }

  TEST_CASE("precondition errors") {
    CHECK_THROWS_AS(census(4, 1), DomainError);
    CHECK_THROWS_AS(in_D_set(TypeSymbol::T3, Form{1, 0, 0, 0}, 5), DomainError);
    CHECK_THROWS_AS(TypeClassifier(3, TypeClassifier::Method::Valuation), DomainError);
    CHECK_THROWS_AS(OrbitPartition(200), ResourceLimit);
  }
}
