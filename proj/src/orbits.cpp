#include "bcf/orbits.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <set>
#include <tuple>
#include <stdexcept>

#include "bcf/errors.hpp"

namespace bcf {

std::string symbol_name(TypeSymbol s) {
  switch (s) {
    case TypeSymbol::T3: return "3";
    case TypeSymbol::T21: return "21";
    case TypeSymbol::T111: return "111";
    case TypeSymbol::T1_2_1: return "1^21";
    case TypeSymbol::T1_3: return "1^3";
    case TypeSymbol::T0: return "0";
    case TypeSymbol::T1_2_1max: return "1^21max";
    case TypeSymbol::T1_2_1star: return "1^21*";
    case TypeSymbol::T1_3max: return "1^3max";
    case TypeSymbol::T1_3star: return "1^3*";
    case TypeSymbol::T1_3starstar: return "1^3**";
    case TypeSymbol::TpV: return "pV";
  }
  return "?";
}

TypeSymbol parse_symbol(const std::string& s) {
  for (auto t : {TypeSymbol::T3, TypeSymbol::T21, TypeSymbol::T111, TypeSymbol::T1_2_1, TypeSymbol::T1_3,
                 TypeSymbol::T0, TypeSymbol::T1_2_1max, TypeSymbol::T1_2_1star, TypeSymbol::T1_3max,
                 TypeSymbol::T1_3star, TypeSymbol::T1_3starstar, TypeSymbol::TpV})
    if (symbol_name(t) == s) return t;
  throw DomainError("unknown type symbol " + s);
}

const std::vector<TypeSymbol>& symbols_level1() {
  static const std::vector<TypeSymbol> v{TypeSymbol::T3,     TypeSymbol::T21,  TypeSymbol::T111,
                                         TypeSymbol::T1_2_1, TypeSymbol::T1_3, TypeSymbol::T0};
  return v;
}

const std::vector<TypeSymbol>& symbols_level2() {
  static const std::vector<TypeSymbol> v{TypeSymbol::T3,         TypeSymbol::T21,         TypeSymbol::T111,
                                         TypeSymbol::T1_2_1max, TypeSymbol::T1_3max,    TypeSymbol::T1_2_1star,
                                         TypeSymbol::T1_3star,  TypeSymbol::T1_3starstar, TypeSymbol::TpV};
  return v;
}

i64 group_order(i64 N) {
  i64 r = 1;
  for (const auto& f : factorize(N)) {
    i64 p = f.p, q = f.q;
    r *= (q / p) * (q / p) * (q / p) * (q / p) * (p * p - 1) * (p * p - p);
  }
  return r;
}

void for_each_group_element(i64 N, const std::function<void(const Mat2&, i64)>& f) {
  std::vector<char> unit(static_cast<std::size_t>(N));
  for (i64 t = 0; t < N; ++t) unit[static_cast<std::size_t>(t)] = gcd(t, N) == 1;
  for (i64 a = 0; a < N; ++a)
    for (i64 b = 0; b < N; ++b)
      for (i64 c = 0; c < N; ++c)
        for (i64 d = 0; d < N; ++d) {
          i64 dt = mod(a * d - b * c, N);
          if (unit[static_cast<std::size_t>(dt)]) f(Mat2{a, b, c, d}, dt);
        }
}

TypeSymbol type_mod_p(const Form& a0, i64 p) {
  Form a = reduce(a0, p);
  if (a.is_zero()) return TypeSymbol::T0;
  int roots = a[0] == 0 ? 1 : 0;
  for (i64 t = 0; t < p; ++t)
    if (evaluate_mod(a, t, 1, p) == 0) ++roots;
  bool singular = disc_mod(a, p) == 0;
  if (!singular) {
    if (roots == 0) return TypeSymbol::T3;
    if (roots == 1) return TypeSymbol::T21;
    return TypeSymbol::T111;
  }
  return roots == 2 ? TypeSymbol::T1_2_1 : TypeSymbol::T1_3;
}

bool in_D_set(TypeSymbol s, const Form& a0, i64 p) {
  i64 q = p * p;
  Form a = reduce(a0, q);
  auto unit = [&](i64 v) { return v % p != 0; };
  auto in_pR = [&](i64 v) { return v % p == 0; };
  auto in_pRx = [&](i64 v) { return v % p == 0 && v != 0; };
  switch (s) {
    case TypeSymbol::T1_2_1max: return a[0] == 0 && unit(a[1]) && in_pR(a[2]) && in_pRx(a[3]);
    case TypeSymbol::T1_2_1star: return a[0] == 0 && unit(a[1]) && in_pR(a[2]) && a[3] == 0;
    case TypeSymbol::T1_3max: return unit(a[0]) && in_pR(a[1]) && in_pR(a[2]) && in_pRx(a[3]);
    case TypeSymbol::T1_3star: return unit(a[0]) && in_pR(a[1]) && in_pRx(a[2]) && a[3] == 0;
    case TypeSymbol::T1_3starstar: return unit(a[0]) && in_pR(a[1]) && a[2] == 0 && a[3] == 0;
    default: throw DomainError("in_D_set: no D-set for symbol " + symbol_name(s));
  }
}

std::vector<Mat2> group_generators(i64 N, bool special_linear) {
  std::vector<Mat2> gens{{1, 1, 0, 1}, {1, 0, 1, 1}};
  if (special_linear || N <= 2) return gens;
  // Greedy generating set of (Z/N)^x.
  std::set<i64> H{1};
  for (i64 t = 2; t < N; ++t) {
    if (gcd(t, N) != 1 || H.count(t)) continue;
    gens.push_back({t, 0, 0, 1});
    std::vector<i64> frontier(H.begin(), H.end());
    while (!frontier.empty()) {
      i64 h = frontier.back();
      frontier.pop_back();
      for (const auto& g : gens) {
        i64 x = h * g.a % N;
        if (H.insert(x).second) frontier.push_back(x);
      }
    }
  }
  return gens;
}

namespace {

template <class Act>
void bfs_partition(i64 N, const std::vector<Mat2>& gens, Act&& act_idx, std::vector<std::int32_t>& id,
                   std::vector<std::int32_t>& det, std::vector<OrbitPartition::Orbit>& orbits) {
  i64 total = N * N * N * N;
  id.assign(static_cast<std::size_t>(total), -1);
  det.assign(static_cast<std::size_t>(total), 0);
  std::vector<i64> queue, dinv;
  for (const auto& g : gens) dinv.push_back(inverse_mod(g.det(), N));
  for (i64 start = 0; start < total; ++start) {
    if (id[static_cast<std::size_t>(start)] >= 0) continue;
    auto oid = static_cast<std::int32_t>(orbits.size());
    queue.clear();
    queue.push_back(start);
    id[static_cast<std::size_t>(start)] = oid;
    det[static_cast<std::size_t>(start)] = 1 % static_cast<std::int32_t>(N);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      i64 cur = queue[h];
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const Mat2& g = gens[gi];
        i64 nxt = act_idx(g, dinv[gi], cur);
        if (id[static_cast<std::size_t>(nxt)] < 0) {
          id[static_cast<std::size_t>(nxt)] = oid;
          det[static_cast<std::size_t>(nxt)] =
              static_cast<std::int32_t>(mod(g.det(), N) * det[static_cast<std::size_t>(cur)] % N);
          queue.push_back(nxt);
        }
      }
    }
    orbits.push_back({start, static_cast<i64>(queue.size())});
  }
}

}  // namespace

OrbitPartition::OrbitPartition(i64 N, Space space, bool special_linear, i64 cap) : N_(N) {
  if (N * N * N * N > cap) throw ResourceLimit("OrbitPartition: N^4 exceeds the enumeration cap");
  auto gens = group_generators(N, special_linear);
  if (space == Space::Primal) {
    bfs_partition(
        N, gens,
        [N](const Mat2& g, i64 di, i64 idx) {
          return form_index(act_mod_fast(g, di, form_at(idx, N), N), N);
        },
        id_, det_, orbits_);
  } else {
    bfs_partition(
        N, gens,
        [N](const Mat2& g, i64 di, i64 idx) {
          DualForm y = act_dual_mod_fast(g, di, dual_at(idx, N), N);
          return form_index(Form{y[0], y[1], y[2], y[3]}, N);
        },
        id_, det_, orbits_);
  }
}

const OrbitPartition& shared_partition(i64 N, OrbitPartition::Space space, bool special_linear) {
  static std::map<std::tuple<i64, int, bool>, std::unique_ptr<OrbitPartition>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(N, static_cast<int>(space), special_linear);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<OrbitPartition>(N, space, special_linear)).first;
  return *it->second;
}

TypeClassifier::TypeClassifier(i64 p, std::optional<Method> method) : p_(p) {
  if (!is_prime(p)) throw DomainError("TypeClassifier: p must be prime");
  method_ = method ? *method : (p <= 3 ? Method::OrbitClosure : Method::Valuation);
  if (method_ == Method::Valuation && p <= 3)
    throw DomainError("TypeClassifier: valuation criteria need p >= 5");
  t1_.resize(static_cast<std::size_t>(p * p * p * p));
  for (i64 i = 0; i < p * p * p * p; ++i) t1_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(type_mod_p(form_at(i, p), p));
  if (method_ == Method::OrbitClosure) {
    i64 q = p * p, total = q * q * q * q;
    if (total > 8'000'000) throw ResourceLimit("TypeClassifier: orbit closure table too large");
    const std::uint8_t unset = 255;
    t2_.assign(static_cast<std::size_t>(total), unset);
    auto gens = group_generators(q);
    for (auto s : {TypeSymbol::T1_2_1max, TypeSymbol::T1_2_1star, TypeSymbol::T1_3max, TypeSymbol::T1_3star,
                   TypeSymbol::T1_3starstar}) {
      std::vector<i64> queue;
      for (i64 i = 0; i < total; ++i) {
        if (!in_D_set(s, form_at(i, q), p)) continue;
        if (t2_[static_cast<std::size_t>(i)] != unset) throw std::logic_error("D-sets overlap");
        t2_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(s);
        queue.push_back(i);
      }
      for (std::size_t h = 0; h < queue.size(); ++h) {
        Form x = form_at(queue[h], q);
        for (const auto& g : gens) {
          i64 j = form_index(act_mod_fast(g, inverse_mod(g.det(), q), x, q), q);
          auto& slot = t2_[static_cast<std::size_t>(j)];
          if (slot == unset) {
            slot = static_cast<std::uint8_t>(s);
            queue.push_back(j);
          } else if (slot != static_cast<std::uint8_t>(s)) {
            throw std::logic_error("orbit closures of distinct D-sets intersect at p = " + std::to_string(p));
          }
        }
      }
    }
  }
}

TypeSymbol TypeClassifier::level1(const Form& a) const {
  return static_cast<TypeSymbol>(t1_[static_cast<std::size_t>(form_index(reduce(a, p_), p_))]);
}

TypeSymbol TypeClassifier::level2(const Form& a0) const {
  i64 q = p_ * p_;
  Form a = reduce(a0, q);
  TypeSymbol t = level1(a);
  if (t == TypeSymbol::T0) return TypeSymbol::TpV;
  if (t == TypeSymbol::T3 || t == TypeSymbol::T21 || t == TypeSymbol::T111) return t;
  if (method_ == Method::OrbitClosure) {
    auto v = t2_[static_cast<std::size_t>(form_index(a, q))];
    if (v == 255) throw std::logic_error("form not covered by D-set orbit closures");
    return static_cast<TypeSymbol>(v);
  }
  int ord = valuation(disc128(a), p_, 4);
  if (t == TypeSymbol::T1_2_1) return ord == 1 ? TypeSymbol::T1_2_1max : TypeSymbol::T1_2_1star;
  if (ord == 2) return TypeSymbol::T1_3max;
  if (ord == 3) return TypeSymbol::T1_3star;
  return TypeSymbol::T1_3starstar;
}

bool is_nonmaximal(TypeSymbol s) {
  return s == TypeSymbol::TpV || s == TypeSymbol::T1_3starstar || s == TypeSymbol::T1_3star ||
         s == TypeSymbol::T1_2_1star;
}

bool is_nm_or_totally_ramified(TypeSymbol s) { return is_nonmaximal(s) || s == TypeSymbol::T1_3max; }

i64 closed_form_count(TypeSymbol s, i64 p, int e) {
  i64 g = (p * p - 1) * (p * p - p);
  i64 p2 = p * p, p3 = p2 * p, p4 = p3 * p;
  if (e == 1) {
    switch (s) {
      case TypeSymbol::T3: return g / 3;
      case TypeSymbol::T21: return g / 2;
      case TypeSymbol::T111: return g / 6;
      case TypeSymbol::T1_2_1: return (p2 - 1) * p;
      case TypeSymbol::T1_3: return p2 - 1;
      case TypeSymbol::T0: return 1;
      default: break;
    }
  } else if (e == 2) {
    switch (s) {
      case TypeSymbol::T3: return p4 * g / 3;
      case TypeSymbol::T21: return p4 * g / 2;
      case TypeSymbol::T111: return p4 * g / 6;
      case TypeSymbol::T1_2_1max: return p3 * g;
      case TypeSymbol::T1_3max: return p2 * g;
      case TypeSymbol::T1_2_1star: return p4 * (p2 - 1);
      case TypeSymbol::T1_3star: return p * g;
      case TypeSymbol::T1_3starstar: return p2 * (p2 - 1);
      case TypeSymbol::TpV: return p4;
      default: break;
    }
  }
  throw DomainError("closed_form_count: symbol " + symbol_name(s) + " does not occur at this level");
}

std::map<TypeSymbol, CensusEntry> census(i64 p, int e) {
  if (!is_prime(p)) throw DomainError("census: p must be prime");
  if (e != 1 && e != 2) throw DomainError("census: level must be p or p^2");
  std::map<TypeSymbol, CensusEntry> out;
  TypeClassifier cls(p);
  i64 q = e == 1 ? p : p * p;
  i64 total = q * q * q * q;
  if (total > 1'000'000'000) throw ResourceLimit("census: V_N too large");
  std::map<TypeSymbol, i64> counts;
  for (i64 i = 0; i < total; ++i) {
    Form a = form_at(i, q);
    ++counts[e == 1 ? cls.level1(a) : cls.level2(a)];
  }
  for (auto s : e == 1 ? symbols_level1() : symbols_level2()) {
    CensusEntry c;
    c.count = counts[s];
    c.closed_form = closed_form_count(s, p, e);
    c.match = c.count == c.closed_form;
    out[s] = c;
  }
  return out;
}

namespace {

// g a = a  <=>  substitution(g) a = det(g) a.
bool fixes(const Mat2& g, const Form& a, i64 q) {
  i64 dt = mod(g.a * g.d - g.b * g.c, q);
  Form s = act_mod_fast(g, 1, a, q);
  for (int i = 0; i < 4; ++i)
    if (s[i] != a[i] * dt % q) return false;
  return true;
}

std::vector<Mat2> stabilizer_mod_p(const Form& a, i64 p) {
  std::vector<Mat2> S;
  Form ar = reduce(a, p);
  for_each_group_element(p, [&](const Mat2& g, i64) {
    if (fixes(g, ar, p)) S.push_back(g);
  });
  return S;
}

// Lifts of h (mod p^{k-1}) to p^k that fix a mod p^k; counts only when out is null.
i64 lift_level(const std::vector<Mat2>& S, const Form& a, i64 p, i64 prev, std::vector<Mat2>* out) {
  i64 q = prev * p;
  Form ar = reduce(a, q);
  i64 count = 0;
  for (const auto& h : S)
    for (i64 i = 0; i < p; ++i)
      for (i64 j = 0; j < p; ++j)
        for (i64 k = 0; k < p; ++k)
          for (i64 l = 0; l < p; ++l) {
            Mat2 g{h.a + prev * i, h.b + prev * j, h.c + prev * k, h.d + prev * l};
            if (fixes(g, ar, q)) {
              ++count;
              if (out) out->push_back(g);
            }
          }
  return count;
}

}  // namespace

std::vector<Mat2> stabilizer(const Form& a, i64 p, int e) {
  std::vector<Mat2> S = stabilizer_mod_p(a, p);
  i64 prev = p;
  for (int k = 2; k <= e; ++k) {
    std::vector<Mat2> next;
    lift_level(S, a, p, prev, &next);
    S = std::move(next);
    prev *= p;
  }
  return S;
}

i64 stabilizer_order(const Form& a, i64 p, int e) {
  if (e < 1) throw DomainError("stabilizer_order: e must be positive");
  i64 q = ipow(p, e);
  if (reduce(a, q).is_zero()) return group_order(q);
  std::vector<Mat2> S = stabilizer_mod_p(a, p);
  if (e == 1) return static_cast<i64>(S.size());
  i64 prev = p;
  for (int k = 2; k < e; ++k) {
    std::vector<Mat2> next;
    lift_level(S, a, p, prev, &next);
    S = std::move(next);
    prev *= p;
  }
  return lift_level(S, a, p, prev, nullptr);
}

i64 stabilizer_order_scan(const Form& a, i64 N, i64 cap) {
  if (group_order(N) > cap) throw ResourceLimit("stabilizer_order_scan: |G_N| exceeds cap");
  Form ar = reduce(a, N);
  i64 count = 0;
  for_each_group_element(N, [&](const Mat2& g, i64) { count += fixes(g, ar, N); });
  return count;
}

i64 nonsquare_mod(i64 p) {
  for (i64 u = 2; u < p; ++u)
    if (pow_mod(u, (p - 1) / 2, p) == p - 1) return u;
  throw DomainError("nonsquare_mod: no non-square mod " + std::to_string(p));
}

std::vector<i64> cube_class_reps(i64 p) {
  if ((p - 1) % 3 != 0) return {1};
  for (i64 u = 2; u < p; ++u)
    if (pow_mod(u, (p - 1) / 3, p) != 1) return {1, u, u * u % p};
  return {1};
}

namespace {

Form first_of_type(TypeSymbol s, i64 p) {
  for (i64 i = 0; i < p * p * p * p; ++i) {
    Form a = form_at(i, p);
    if (type_mod_p(a, p) == s) return a;
  }
  throw std::logic_error("no form of type " + symbol_name(s));
}

Form level1_rep(TypeSymbol s, i64 p) {
  switch (s) {
    case TypeSymbol::T111: return {0, 1, 1, 0};
    case TypeSymbol::T21: return reduce(Form{0, 1, 0, -nonsquare_mod(p)}, p);
    case TypeSymbol::T1_2_1: return {0, 1, 0, 0};
    case TypeSymbol::T1_3: return {1, 0, 0, 0};
    case TypeSymbol::T0: return {0, 0, 0, 0};
    default: return first_of_type(s, p);
  }
}

std::vector<Form> standard_reps(TypeSymbol s, i64 p) {
  i64 nu = nonsquare_mod(p);
  switch (s) {
    case TypeSymbol::T3:
    case TypeSymbol::T21:
    case TypeSymbol::T111: return {level1_rep(s, p)};
    case TypeSymbol::T1_2_1max: return {{0, 1, 0, p}, {0, 1, 0, p * nu}};
    case TypeSymbol::T1_2_1star: return {{0, 1, 0, 0}};
    case TypeSymbol::T1_3max: {
      std::vector<Form> v;
      for (i64 u : cube_class_reps(p)) v.push_back({1, 0, 0, p * u});
      return v;
    }
    case TypeSymbol::T1_3star: return {{1, 0, p, 0}, {1, 0, p * nu, 0}};
    case TypeSymbol::T1_3starstar: return {{1, 0, 0, 0}};
    case TypeSymbol::TpV: {
      std::vector<Form> v;
      for (auto t : symbols_level1()) {
        Form r = level1_rep(t, p);
        v.push_back({p * r[0], p * r[1], p * r[2], p * r[3]});
      }
      return v;
    }
    default: throw DomainError("standard_reps: not a level p^2 symbol");
  }
}

}  // namespace

std::vector<OrbitClass> orbit_split(i64 p, TypeSymbol s, int e) {
  if (!is_prime(p)) throw DomainError("orbit_split: p must be prime");
  std::vector<OrbitClass> out;
  if (e == 1) {
    Form r = level1_rep(s, p);
    i64 st = stabilizer_order(r, p, 1);
    out.push_back({r, group_order(p) / st, st});
    if (out[0].size != closed_form_count(s, p, 1)) throw std::logic_error("orbit_split: level p type is not one orbit");
    return out;
  }
  if (e != 2) throw DomainError("orbit_split: level must be p or p^2");
  i64 q = p * p;
  i64 G = group_order(q);
  const OrbitPartition* part = q * q * q * q <= 8'000'000 ? &shared_partition(q) : nullptr;
  if (p >= 5) {
    for (const Form& r : standard_reps(s, p)) {
      i64 st = stabilizer_order(r, p, 2);
      out.push_back({reduce(r, q), G / st, st});
    }
  } else {
    TypeClassifier cls(p);
    for (const auto& o : part->orbits()) {
      Form r = form_at(o.rep, q);
      if (cls.level2(r) != s) continue;
      out.push_back({r, o.size, G / o.size});
    }
  }
  i64 total = 0;
  std::set<std::int32_t> seen;
  for (const auto& c : out) {
    total += c.size;
    if (part) {
      auto oid = part->orbit_of(form_index(c.rep, q));
      if (!seen.insert(oid).second) throw std::logic_error("orbit_split: representatives are equivalent");
      if (part->orbits()[static_cast<std::size_t>(oid)].size != c.size) throw std::logic_error("orbit_split: size mismatch");
    }
  }
  if (total != closed_form_count(s, p, 2)) throw std::logic_error("orbit_split: orbits do not cover " + symbol_name(s));
  return out;
}

std::vector<G27Row> g27_stabilizer_table() {
  std::vector<G27Row> rows{{{1, 0, 3, 3}, 0, 27}, {{1, 0, 6, 3}, 0, 27}, {{1, 3, 0, 3}, 0, 81}};
  for (i64 a : {1, 4, 7}) rows.push_back({{1, -3, 0, 3 * a}, 0, 243});
  for (i64 a : {1, 4, 7}) rows.push_back({{1, 0, 0, 3 * a}, 0, 243});
  for (auto& r : rows) {
    r.rep = reduce(r.rep, 27);
    r.stabilizer = stabilizer_order_scan(r.rep, 27);
  }
  return rows;
}

}  // namespace bcf
