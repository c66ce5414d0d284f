#include "bcf/gauss.hpp"

#include <algorithm>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "bcf/errors.hpp"

namespace bcf {

namespace {

std::vector<i64> unit_inverses(i64 N) {
  std::vector<i64> inv(static_cast<std::size_t>(N), 0);
  for (i64 t = 1; t < N; ++t)
    if (gcd(t, N) == 1) inv[static_cast<std::size_t>(t)] = inverse_mod(t, N);
  if (N == 1) inv[0] = 0;
  return inv;
}

// chi(t mod m) as an exponent of zeta_L, for t in [0, N).
std::vector<i64> character_table(const DirichletCharacter& chi, i64 N) {
  std::vector<i64> e(static_cast<std::size_t>(N), 0);
  for (i64 t = 0; t < N; ++t)
    if (gcd(t, N) == 1) e[static_cast<std::size_t>(t)] = chi.exponent(t % chi.modulus());
  return e;
}

i64 pairing_reduced(const Form& x, const DualForm& y, i64 N) {
  return (x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]) % N;
}

CyclotomicSum from_histogram(i64 M, const std::vector<i64>& h) {
  CyclotomicSum s(M);
  for (i64 k = 0; k < M; ++k)
    if (h[static_cast<std::size_t>(k)]) s.add(k, h[static_cast<std::size_t>(k)]);
  return s;
}

CyclotomicSum root_of_unity(i64 order, i64 k) {
  CyclotomicSum s(order);
  s.add(k, 1);
  return s;
}

Form reduce_fast(const Form& x, i64 N) { return reduce(x, N); }

}  // namespace

std::vector<CyclotomicSum> orbital_gauss_sums(const DirichletCharacter& chi, const Form& a,
                                              const std::vector<DualForm>& bs, i64 N, int threads) {
  if (N < 1 || N >= 20000) throw DomainError("orbital_gauss_sums: modulus out of range");
  if (N % chi.modulus() != 0) throw DomainError("orbital_gauss_sums: character modulus must divide N");
  if (group_order(N) > kGaussGroupCap)
    throw ResourceLimit("orbital_gauss_sums: |G_" + std::to_string(N) +
                        "| exceeds the cap; split N into coprime factors and use the decomposition formula");
  const i64 L = chi.value_order();
  const i64 M = lcm(N, L), sN = M / N, sL = M / L;
  const auto inv = unit_inverses(N);
  const auto ce = character_table(chi, N);
  const Form ar = reduce_fast(a, N);
  std::vector<DualForm> br;
  br.reserve(bs.size());
  for (const auto& b : bs) br.push_back(reduce(b, N));
  const std::size_t nb = br.size();

  threads = std::max(1, std::min<int>(threads, static_cast<int>(N)));
  std::vector<std::vector<i64>> hist(static_cast<std::size_t>(threads),
                                     std::vector<i64>(nb * static_cast<std::size_t>(M), 0));
  auto work = [&](int w) {
    auto& h = hist[static_cast<std::size_t>(w)];
    for (i64 g0 = w; g0 < N; g0 += threads)
      for (i64 g1 = 0; g1 < N; ++g1)
        for (i64 g2 = 0; g2 < N; ++g2)
          for (i64 g3 = 0; g3 < N; ++g3) {
            i64 det = mod(g0 * g3 - g1 * g2, N);
            i64 di = inv[static_cast<std::size_t>(det)];
            if (di == 0 && N > 1) continue;
            Form x = act_mod_fast(Mat2{g0, g1, g2, g3}, di, ar, N);
            i64 off = ce[static_cast<std::size_t>(det)] * sL;
            for (std::size_t j = 0; j < nb; ++j)
              ++h[j * static_cast<std::size_t>(M) + static_cast<std::size_t>((pairing_reduced(x, br[j], N) * sN + off) % M)];
          }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<CyclotomicSum> out;
  out.reserve(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    std::vector<i64> tot(static_cast<std::size_t>(M), 0);
    for (const auto& h : hist)
      for (i64 k = 0; k < M; ++k) tot[static_cast<std::size_t>(k)] += h[j * static_cast<std::size_t>(M) + static_cast<std::size_t>(k)];
    out.push_back(from_histogram(M, tot));
  }
  return out;
}

CyclotomicSum orbital_gauss_sum(const DirichletCharacter& chi, const Form& a, const DualForm& b, i64 N) {
  return orbital_gauss_sums(chi, a, {b}, N).front();
}

std::vector<CyclotomicSum> orbital_gauss_sums_V(const DirichletCharacter& chi, const Form& a,
                                                const std::vector<Form>& bs, i64 N, int threads) {
  std::vector<DualForm> d;
  d.reserve(bs.size());
  for (const auto& b : bs) d.push_back(iota_inverse_mod(b, N));
  return orbital_gauss_sums(chi, a, d, N, threads);
}

// ---------------------------------------------------------------------------------------------
// Finite functions

FiniteFunction::FiniteFunction(i64 N, Domain domain, i64 M, i64 den) : N_(N), domain_(domain), M_(M), den_(den) {
  if (N < 1 || M < 1 || den < 1) throw DomainError("FiniteFunction: modulus, order and denominator must be positive");
}

void FiniteFunction::set(i64 idx, const CyclotomicSum& v) {
  if (idx < 0 || idx >= N_ * N_ * N_ * N_) throw DomainError("FiniteFunction::set: index out of range");
  if (M_ % v.order() != 0) {
    i64 M2 = lcm(M_, v.order());
    for (auto& [k, w] : vals_) w = w.embed(M2);
    M_ = M2;
  }
  if (v.is_zero()) {
    vals_.erase(idx);
    return;
  }
  vals_[idx] = v.embed(M_);
}

void FiniteFunction::set_integer(i64 idx, i64 v) { set(idx, CyclotomicSum::integer(M_, v)); }

CyclotomicSum FiniteFunction::numerator(i64 idx) const {
  auto it = vals_.find(idx);
  return it == vals_.end() ? CyclotomicSum(M_) : it->second;
}

bool FiniteFunction::value_equals(i64 idx, const Rational& q) const { return numerator(idx).equals_fraction(q, den_); }

std::complex<double> FiniteFunction::value(i64 idx) const { return numerator(idx).value() / static_cast<double>(den_); }

bool FiniteFunction::is_rational() const {
  for (const auto& [k, v] : vals_)
    if (!v.as_integer()) return false;
  return true;
}

FiniteFunction indicator_disc_zero(i64 p) {
  if (!is_prime(p)) throw DomainError("indicator_disc_zero: p must be prime");
  FiniteFunction f(p);
  for (i64 i = 0; i < p * p * p * p; ++i)
    if (disc_mod(form_at(i, p), p) == 0) f.set_integer(i, 1);
  return f;
}

FiniteFunction indicator_phi(i64 p, bool with_max) {
  TypeClassifier cls(p);
  i64 q = p * p;
  FiniteFunction f(q);
  for (i64 i = 0; i < q * q * q * q; ++i) {
    TypeSymbol s = cls.level2(form_at(i, q));
    if (with_max ? is_nm_or_totally_ramified(s) : is_nonmaximal(s)) f.set_integer(i, 1);
  }
  return f;
}

FiniteFunction f_chi_a(const DirichletCharacter& chi, const Form& a, i64 N) {
  if (N % chi.modulus() != 0) throw DomainError("f_chi_a: character modulus must divide N");
  const i64 L = chi.value_order();
  auto gens = group_generators(N);
  std::vector<i64> ginv;
  for (const auto& g : gens) ginv.push_back(inverse_mod(g.det(), N));
  i64 start = form_index(reduce(a, N), N);
  // Orbit element -> det of a transporter from a.
  std::unordered_map<i64, i64> det{{start, 1}};
  std::vector<i64> queue{start};
  bool trivial_on_stab = true;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    i64 idx = queue[h];
    Form x = form_at(idx, N);
    i64 dx = det[idx];
    for (std::size_t k = 0; k < gens.size(); ++k) {
      i64 j = form_index(act_mod_fast(gens[k], ginv[k], x, N), N);
      i64 dj = mulmod(dx, mod(gens[k].det(), N), N);
      auto it = det.find(j);
      if (it == det.end()) {
        det.emplace(j, dj);
        queue.push_back(j);
      } else if (chi.exponent(it->second % chi.modulus()) != chi.exponent(dj % chi.modulus())) {
        trivial_on_stab = false;
      }
    }
  }
  FiniteFunction f(N, FiniteFunction::Domain::Primal, L);
  if (!trivial_on_stab) return f;
  i64 stab = group_order(N) / static_cast<i64>(det.size());
  for (const auto& [idx, d] : det) {
    CyclotomicSum v(L);
    v.add(chi.exponent(d % chi.modulus()), stab);
    f.set(idx, v);
  }
  return f;
}

namespace {

// sum_x f(x) zeta_N^{sign [x, y]} with y = point idx in the opposite space.
CyclotomicSum transform_at(const FiniteFunction& f, i64 y_idx, int sign, std::vector<i64>& buf) {
  const i64 N = f.modulus();
  const i64 R = lcm(f.order(), N), sM = R / f.order(), sN = R / N;
  buf.assign(static_cast<std::size_t>(R), 0);
  Form yf = form_at(y_idx, N);
  DualForm y{yf[0], yf[1], yf[2], yf[3]};
  for (const auto& [idx, v] : f.support()) {
    i64 k = pairing_reduced(form_at(idx, N), y, N);
    if (sign < 0) k = (N - k) % N;
    const auto& c = v.coefficients();
    for (i64 j = 0; j < f.order(); ++j)
      if (c[static_cast<std::size_t>(j)]) buf[static_cast<std::size_t>((j * sM + k * sN) % R)] += c[static_cast<std::size_t>(j)];
  }
  return from_histogram(R, buf);
}

FiniteFunction transform(const FiniteFunction& f, int sign, i64 den, i64 cap) {
  const i64 N = f.modulus(), n4 = N * N * N * N;
  if (n4 * std::max<i64>(1, static_cast<i64>(f.support().size())) > cap || n4 > 20'000'000)
    throw ResourceLimit("fourier_transform: N^4 * |support| exceeds the cap; evaluate at points instead");
  auto dom = f.domain() == FiniteFunction::Domain::Primal ? FiniteFunction::Domain::Dual : FiniteFunction::Domain::Primal;
  FiniteFunction out(N, dom, lcm(f.order(), N), den);
  std::vector<i64> buf;
  for (i64 b = 0; b < n4; ++b) {
    CyclotomicSum s = transform_at(f, b, sign, buf);
    if (!s.is_zero()) out.set(b, s);
  }
  return out;
}

}  // namespace

CyclotomicSum fourier_numerator(const FiniteFunction& f, i64 b_idx) {
  std::vector<i64> buf;
  return transform_at(f, b_idx, +1, buf);
}

FiniteFunction fourier_transform(const FiniteFunction& f, i64 cap) {
  const i64 N = f.modulus();
  return transform(f, +1, f.denominator() * N * N * N * N, cap);
}

FiniteFunction inverse_fourier_transform(const FiniteFunction& g, i64 cap) { return transform(g, -1, g.denominator(), cap); }

FiniteFunction scale_argument(const FiniteFunction& f, i64 t) {
  const i64 N = f.modulus();
  i64 ti = inverse_mod(mod(t, N), N);
  FiniteFunction out(N, f.domain(), f.order(), f.denominator());
  for (const auto& [idx, v] : f.support()) {
    Form x = form_at(idx, N);
    Form y{mulmod(x[0], ti, N), mulmod(x[1], ti, N), mulmod(x[2], ti, N), mulmod(x[3], ti, N)};
    out.set(form_index(y, N), v);
  }
  return out;
}

FiniteFunction crt_product(const FiniteFunction& f1, const FiniteFunction& f2) {
  const i64 N1 = f1.modulus(), N2 = f2.modulus(), N = N1 * N2;
  if (gcd(N1, N2) != 1) throw DomainError("crt_product: moduli must be coprime");
  FiniteFunction out(N, f1.domain(), lcm(f1.order(), f2.order()), f1.denominator() * f2.denominator());
  for (const auto& [i1, v1] : f1.support())
    for (const auto& [i2, v2] : f2.support()) {
      Form x = crt_combine({form_at(i1, N1), form_at(i2, N2)}, {N1, N2});
      out.set(form_index(reduce(x, N), N), v1 * v2);
    }
  return out;
}

std::string render(const CyclotomicSum& s, i64 den) {
  if (auto n = s.as_integer()) {
    if (*n % den == 0) return to_string(*n / den);
    i128 g = *n;
    i64 d = den;
    i128 a = g < 0 ? -g : g, b = d;
    while (b) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    if (a == 0) a = 1;
    return to_string(g / a) + "/" + to_string(static_cast<i128>(d) / a);
  }
  auto z = s.value() / static_cast<double>(den);
  return format_double(z.real()) + (z.imag() < 0 ? "-" : "+") + format_double(std::abs(z.imag())) + "i";
}

Mat2 random_group_element(i64 N, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> d(0, N - 1);
  while (true) {
    Mat2 g{d(rng), d(rng), d(rng), d(rng)};
    if (N == 1 || is_unit(mod(g.det(), N), N)) return g;
  }
}

Form random_form(i64 N, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> d(0, N - 1);
  return {d(rng), d(rng), d(rng), d(rng)};
}

// ---------------------------------------------------------------------------------------------
// Table drivers

namespace {

void require_prime_ge5(i64 p, const char* who) {
  if (!is_prime(p) || p < 5) throw DomainError(std::string(who) + ": needs a prime p >= 5");
}

std::string form_str(const Form& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

Form first_of_type(TypeSymbol s, i64 p) {
  for (i64 i = 0; i < p * p * p * p; ++i)
    if (type_mod_p(form_at(i, p), p) == s) return form_at(i, p);
  throw std::logic_error("no form of the requested type");
}

}  // namespace

VerificationReport verify_mori_table(i64 p, int threads) {
  require_prime_ge5(p, "verify_mori_table");
  VerificationReport rep;
  rep.name = "mori p=" + std::to_string(p);
  const i64 nu = nonsquare_mod(p);
  using T = TypeSymbol;
  const std::vector<std::pair<T, Form>> bs{{T::T0, {0, 0, 0, 0}},        {T::T1_3, {1, 0, 0, 0}},
                                           {T::T1_2_1, {0, 1, 0, 0}},   {T::T111, {0, 1, 1, 0}},
                                           {T::T21, {0, 1, 0, mod(-nu, p)}}, {T::T3, first_of_type(T::T3, p)}};
  auto expected = [p](T a, T b) -> i64 {
    bool cube = a == T::T1_3;
    switch (b) {
      case T::T0: return (p * p - p) * (p * p - 1);
      case T::T1_3: return cube ? -p * (p - 1) : p * (p - 1) * (p - 1);
      case T::T1_2_1: return cube ? p * (p - 1) * (p - 1) : p * (p - 1) * (p - 2);
      case T::T111: return cube ? p * (p - 1) * (2 * p - 1) : -3 * p * (p - 1);
      case T::T21: return -p * (p - 1);
      case T::T3: return cube ? -p * (p - 1) * (p + 1) : 0;
      default: return 0;
    }
  };
  std::vector<Form> bforms;
  for (const auto& [t, b] : bs) {
    if (type_mod_p(b, p) != t) throw std::logic_error("mori: representative has the wrong type");
    bforms.push_back(b);
  }
  auto chi = DirichletCharacter::trivial(p);
  for (auto [at, a] : {std::pair<T, Form>{T::T1_3, {1, 0, 0, 0}}, {T::T1_2_1, {0, 1, 0, 0}}}) {
    auto W = orbital_gauss_sums_V(chi, a, bforms, p, threads);
    for (std::size_t j = 0; j < bs.size(); ++j) {
      i64 e = expected(at, bs[j].first);
      rep.add("a=" + symbol_name(at) + ",b=" + symbol_name(bs[j].first), std::to_string(e), render(W[j]),
              W[j].equals_integer(e));
    }
  }
  return rep;
}

VerificationReport verify_singular_table(i64 p, int threads) {
  require_prime_ge5(p, "verify_singular_table");
  using T = TypeSymbol;
  const i64 q = p * p, p5 = ipow(p, 5), p6 = p5 * p;
  VerificationReport rep;
  rep.name = "singular p=" + std::to_string(p);
  const std::vector<T> atypes{T::T1_3starstar, T::T1_3star, T::T1_3max, T::T1_2_1star};
  const std::vector<T> btypes{T::T1_3starstar, T::T1_3star, T::T1_3max, T::T1_2_1star,
                              T::T1_2_1max,    T::T111,     T::T21,     T::T3};
  const i64 A = p5 * (p - 1) * (p - 1), B = -p5 * (p - 1);
  // nullopt marks the two averaged cells.
  auto expected = [&](T b, T a) -> std::optional<i64> {
    int ia = static_cast<int>(std::find(atypes.begin(), atypes.end(), a) - atypes.begin());
    switch (b) {
      case T::T1_3starstar: return std::array<i64, 4>{A, A, B, A}[ia];
      case T::T1_3star: return std::array<i64, 4>{A, A, B, B}[ia];
      case T::T1_3max:
        if (a == T::T1_3max) return std::nullopt;
        return std::array<i64, 4>{B, B, 0, 0}[ia];
      case T::T1_2_1star: return std::array<i64, 4>{A, B, 0, 0}[ia];
      case T::T1_2_1max:
        if (a == T::T1_3star) return std::nullopt;
        return std::array<i64, 4>{B, 0, 0, 0}[ia];
      default: return 0;
    }
  };
  std::map<T, std::vector<OrbitClass>> split;
  for (T t : btypes) split[t] = orbit_split(p, t, 2);
  std::vector<Form> bforms;
  std::vector<T> btype_of;
  for (T t : btypes)
    for (const auto& c : split[t]) {
      bforms.push_back(c.rep);
      btype_of.push_back(t);
    }
  auto chi = DirichletCharacter::trivial(q);
  // Weighted sums over a for the averaged cells, per b representative.
  std::map<std::pair<T, std::size_t>, CyclotomicSum> avg;
  std::map<T, i64> type_size;
  for (T at : atypes) {
    for (const auto& ac : orbit_split(p, at, 2)) {
      type_size[at] += ac.size;
      auto W = orbital_gauss_sums_V(chi, ac.rep, bforms, q, threads);
      for (std::size_t j = 0; j < bforms.size(); ++j) {
        auto e = expected(btype_of[j], at);
        if (!e) {
          auto key = std::make_pair(at, j);
          auto it = avg.find(key);
          if (it == avg.end()) it = avg.emplace(key, CyclotomicSum(q)).first;
          it->second += W[j] * ac.size;
          continue;
        }
        rep.add("a=" + symbol_name(at) + " " + form_str(ac.rep) + ",b=" + symbol_name(btype_of[j]) + " " +
                    form_str(bforms[j]),
                std::to_string(*e), render(W[j]), W[j].equals_integer(*e));
      }
    }
  }
  for (const auto& [key, s] : avg) {
    const auto& [at, j] = key;
    i64 n = type_size[at];
    rep.add("average a=" + symbol_name(at) + ",b=" + symbol_name(btype_of[j]) + " " + form_str(bforms[j]),
            std::to_string(p5), render(s, n), s.equals_fraction(Rational(p5), n));
  }
  // Individual values behind the averages.
  const bool p1mod3 = p % 3 == 1;
  std::vector<Form> b121, b13;
  for (i64 v = 1; v < p; ++v) {
    b121.push_back({0, q - 1, 0, mod(-p * v, q)});
    b13.push_back({1, 0, 0, mod(-p * v, q)});
  }
  for (i64 u = 1; u < p; ++u) {
    auto W = orbital_gauss_sums_V(chi, {1, 0, p * u, 0}, b121, q, threads);
    for (i64 v = 1; v < p; ++v) {
      // -alpha / (3 l) with alpha = p u, l = p v.
      i64 r = mulmod(mod(-u, p), inverse_mod(mod(3 * v, p), p), p);
      bool sq = pow_mod(r, (p - 1) / 2, p) == 1;
      i64 e = sq ? p5 + p6 : p5 - p6;
      rep.add("individual a=(1,0," + std::to_string(p * u) + ",0),b=(0,-1,0," + std::to_string(-p * v) + ")",
              std::to_string(e), render(W[static_cast<std::size_t>(v - 1)]), W[static_cast<std::size_t>(v - 1)].equals_integer(e));
    }
    W = orbital_gauss_sums_V(chi, {1, 0, 0, p * u}, b13, q, threads);
    for (i64 v = 1; v < p; ++v) {
      i64 r = mulmod(mod(-u, p), inverse_mod(v, p), p);
      i64 e = p5;
      if (p1mod3) e = pow_mod(r, (p - 1) / 3, p) == 1 ? p5 + 2 * p6 : p5 - p6;
      rep.add("individual a=(1,0,0," + std::to_string(p * u) + "),b=(1,0,0," + std::to_string(-p * v) + ")",
              std::to_string(e), render(W[static_cast<std::size_t>(v - 1)]), W[static_cast<std::size_t>(v - 1)].equals_integer(e));
    }
  }
  return rep;
}

VerificationReport verify_fourier_fp(i64 p) {
  if (!is_prime(p)) throw DomainError("verify_fourier_fp: p must be prime");
  VerificationReport rep;
  rep.name = "fourier f_p p=" + std::to_string(p);
  FiniteFunction fh = fourier_transform(indicator_disc_zero(p));
  const i64 p2 = p * p, p3 = p2 * p;
  const Rational v_nonsing(-1, p3), v_sing = Rational(1, p2) - Rational(1, p3),
      v_zero = Rational(1, p) + Rational(1, p2) - Rational(1, p3);
  struct Acc {
    i64 count = 0, bad = 0;
    std::string first_bad;
  };
  std::map<std::string, Acc> acc;
  const std::vector<std::pair<std::string, Rational>> classes{
      {"P*(b)!=0", v_nonsing}, {"P*(b)=0,b!=0", v_sing}, {"b=0", v_zero}};
  for (i64 b = 0; b < p2 * p2; ++b) {
    Form bf = form_at(b, p);
    DualForm y{bf[0], bf[1], bf[2], bf[3]};
    int cls = b == 0 ? 2 : (dual_disc_mod(y, p) != 0 ? 0 : 1);
    auto& a = acc[classes[static_cast<std::size_t>(cls)].first];
    ++a.count;
    if (!fh.value_equals(b, classes[static_cast<std::size_t>(cls)].second)) {
      if (a.bad++ == 0) a.first_bad = render(fh.numerator(b), fh.denominator()) + " at " + form_str(bf);
    }
  }
  for (const auto& [name, val] : classes) {
    const auto& a = acc[name];
    rep.add(name + " (" + std::to_string(a.count) + " points)", to_string(val),
            a.bad ? a.first_bad : to_string(val), a.bad == 0 && a.count > 0);
  }
  return rep;
}

namespace {

struct PhiCell {
  std::string label;
  Rational value;
};

// Expected transform of Phi_p / Phi'_p at a dual point, typed through iota.
PhiCell phi_expected(const DualForm& y, i64 p, const TypeClassifier& cls, bool with_max) {
  using T = TypeSymbol;
  const i64 q = p * p;
  Form x = reduce(iota(y), q);
  auto R = [p](i64 num, int e) { return Rational(num, ipow(p, e)); };
  bool in_pV = x[0] % p == 0 && x[1] % p == 0 && x[2] % p == 0 && x[3] % p == 0;
  if (in_pV) {
    Form xb{x[0] / p, x[1] / p, x[2] / p, x[3] / p};
    T t = type_mod_p(xb, p);
    std::string lab = "pb', b' " + symbol_name(t);
    if (!with_max) {
      switch (t) {
        case T::T0: return {lab, R(1, 2) + R(1, 3) - R(1, 5)};
        case T::T1_3:
        case T::T1_2_1: return {lab, R(1, 3) - R(1, 5)};
        default: return {lab, R(-1, 5)};
      }
    }
    switch (t) {
      case T::T0: return {lab, R(2, 2) - R(1, 4)};
      case T::T1_3: return {lab, R(1, 3) - R(1, 4)};
      case T::T1_2_1: return {lab, R(2, 3) - R(2, 4)};
      case T::T111: return {lab, R(2, 3) - R(3, 4)};
      case T::T21: return {lab, R(-1, 4)};
      case T::T3: return {lab, R(-1, 3)};
      default: break;
    }
    throw std::logic_error("phi_expected: unexpected level-1 type");
  }
  T t = cls.level2(x);
  std::string lab = "b " + symbol_name(t);
  if (!with_max) {
    if (t == T::T1_3starstar) return {lab, R(1, 3) - R(1, 5)};
    if (t == T::T1_3star || t == T::T1_3max) return {lab, R(-1, 5)};
    return {lab, Rational(0)};
  }
  if (t == T::T1_3starstar) return {lab, R(1, 3) - R(1, 4)};
  if (t == T::T1_3star) return {lab, R(-1, 4)};
  return {lab, Rational(0)};
}

}  // namespace

VerificationReport verify_fourier_phi(i64 p, bool with_max) {
  require_prime_ge5(p, "verify_fourier_phi");
  const i64 q = p * p, n4 = q * q * q * q;
  VerificationReport rep;
  rep.name = std::string(with_max ? "fourier Phi'_p" : "fourier Phi_p") + " p=" + std::to_string(p);
  FiniteFunction f = indicator_phi(p, with_max);
  TypeClassifier cls(p);
  const auto& part = shared_partition(q, OrbitPartition::Space::Dual);
  struct Acc {
    i64 orbits = 0, points = 0, bad = 0;
    Rational value;
    std::string first_bad;
  };
  std::map<std::string, Acc> acc;
  for (const auto& o : part.orbits()) {
    Form yf = form_at(o.rep, q);
    DualForm y{yf[0], yf[1], yf[2], yf[3]};
    PhiCell e = phi_expected(y, p, cls, with_max);
    CyclotomicSum s = fourier_numerator(f, o.rep);
    auto& a = acc[e.label];
    a.value = e.value;
    ++a.orbits;
    a.points += o.size;
    if (!s.equals_fraction(e.value, n4) && a.bad++ == 0) a.first_bad = render(s, n4) + " at " + form_str(yf);
  }
  for (const auto& [lab, a] : acc)
    rep.add(lab + " (" + std::to_string(a.orbits) + " orbits, " + std::to_string(a.points) + " points)",
            to_string(a.value), a.bad ? a.first_bad : to_string(a.value), a.bad == 0);
  // The transform of an invariant function is constant on dual orbits; spot-check off representatives.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> d(0, n4 - 1);
  i64 off = 0;
  for (int k = 0; k < 20; ++k) {
    i64 b = d(rng);
    i64 r = part.orbits()[static_cast<std::size_t>(part.orbit_of(b))].rep;
    off += equal(fourier_numerator(f, b), fourier_numerator(f, r)) ? 0 : 1;
  }
  rep.add("orbit constancy (20 random points)", "0 mismatches", std::to_string(off) + " mismatches", off == 0);
  return rep;
}

VerificationReport verify_parseval(i64 p, bool with_max) {
  require_prime_ge5(p, "verify_parseval");
  const i64 q = p * p, n4 = q * q * q * q;
  VerificationReport rep;
  rep.name = std::string(with_max ? "parseval Phi'_p" : "parseval Phi_p") + " p=" + std::to_string(p);
  FiniteFunction f = indicator_phi(p, with_max);
  TypeClassifier cls(p);
  const auto& part = shared_partition(q, OrbitPartition::Space::Dual);
  // sum_b |S_b|^2 = N^4 sum_a |f(a)|^2 where fhat = S / N^4.
  CyclotomicSum lhs(q);
  Rational theory(0);
  for (const auto& o : part.orbits()) {
    CyclotomicSum s = fourier_numerator(f, o.rep);
    lhs += (s * s.conj()) * o.size;
    Form yf = form_at(o.rep, q);
    Rational v = phi_expected({yf[0], yf[1], yf[2], yf[3]}, p, cls, with_max).value;
    theory += v * v * Rational(o.size);
  }
  i64 mass = static_cast<i64>(f.support().size());
  Rational rhs(mass, n4);
  rep.add("computed sum |fhat|^2", to_string(rhs), render(lhs, n4 * n4), lhs.equals_fraction(rhs, n4 * n4));
  rep.add("tabulated sum |fhat|^2", to_string(rhs), to_string(theory), theory == rhs);
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Identities

VerificationReport check_reduction(i64 p, const IdentityOptions& opt) {
  const i64 q = p * p;
  VerificationReport rep;
  rep.name = "reduction N=" + std::to_string(q) + " m=" + std::to_string(p);
  std::mt19937_64 rng(opt.seed);
  const i64 ratio = group_order(q) / group_order(p);
  std::vector<DirichletCharacter> chars{DirichletCharacter::trivial(p)};
  auto all = DirichletCharacter::all(p);
  if (all.size() > 1) chars.push_back(all[1]);
  for (const auto& chi : chars)
    for (int s = 0; s < opt.samples; ++s) {
      Form a = random_form(p, rng);
      std::vector<DualForm> bq, bp;
      for (int k = 0; k < 3; ++k) {
        Form b = random_form(q, rng);
        bq.push_back({b[0], b[1], b[2], b[3]});
        bp.push_back(reduce(DualForm{b[0], b[1], b[2], b[3]}, p));
      }
      Form ma{p * a[0], p * a[1], p * a[2], p * a[3]};
      auto Wq = orbital_gauss_sums(chi, ma, bq, q, opt.threads);
      auto Wp = orbital_gauss_sums(chi, a, bp, p, opt.threads);
      for (std::size_t k = 0; k < bq.size(); ++k) {
        CyclotomicSum rhs = Wp[k] * ratio;
        rep.add(chi.label() + " a=" + form_str(a) + " b=" + form_str(Form{bq[k][0], bq[k][1], bq[k][2], bq[k][3]}),
                render(rhs), render(Wq[k]), equal(Wq[k], rhs));
      }
    }
  return rep;
}

VerificationReport check_decomposition(i64 N1, i64 N2, const IdentityOptions& opt) {
  if (gcd(N1, N2) != 1 || factorize(N1).size() != 1 || factorize(N2).size() != 1)
    throw DomainError("check_decomposition: needs coprime prime powers");
  const i64 N = N1 * N2;
  const i64 p1 = factorize(N1)[0].p, p2 = factorize(N2)[0].p;
  VerificationReport rep;
  rep.name = "decomposition N=" + std::to_string(N1) + "*" + std::to_string(N2);
  std::mt19937_64 rng(opt.seed);
  for (const auto& chi : DirichletCharacter::all(N)) {
    auto c1 = chi.p_part(p1), c2 = chi.p_part(p2);
    CyclotomicSum r1 = root_of_unity(c1.value_order(), 2 * c1.exponent(mod(N2, N1)));
    CyclotomicSum r2 = root_of_unity(c2.value_order(), 2 * c2.exponent(mod(N1, N2)));
    for (int s = 0; s < std::max(1, opt.samples / 4); ++s) {
      Form a = random_form(N, rng), b = random_form(N, rng);
      DualForm y{b[0], b[1], b[2], b[3]};
      CyclotomicSum lhs = orbital_gauss_sum(chi, a, y, N);
      CyclotomicSum rhs = r1 * r2 * orbital_gauss_sum(c1, reduce(a, N1), reduce(y, N1), N1) *
                          orbital_gauss_sum(c2, reduce(a, N2), reduce(y, N2), N2);
      bool ok = equal(lhs, rhs) && std::abs(lhs.value() - rhs.value()) < 1e-9 * (1 + std::abs(lhs.value()));
      rep.add(chi.label() + " a=" + form_str(a) + " b=" + form_str(b), render(rhs), render(lhs), ok);
    }
  }
  return rep;
}

VerificationReport check_product_fourier(i64 N1, i64 N2, const IdentityOptions& opt) {
  const i64 N = N1 * N2;
  VerificationReport rep;
  rep.name = "product fourier N=" + std::to_string(N1) + "*" + std::to_string(N2);
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<i64> val(-3, 3);
  auto random_sparse = [&](i64 n) {
    FiniteFunction f(n);
    std::uniform_int_distribution<i64> idx(0, n * n * n * n - 1);
    for (int k = 0; k < 5; ++k) f.set_integer(idx(rng), val(rng));
    return f;
  };
  for (int trial = 0; trial < 2; ++trial) {
    FiniteFunction f1 = random_sparse(N1), f2 = random_sparse(N2);
    FiniteFunction lhs = fourier_transform(crt_product(f1, f2));
    FiniteFunction g1 = fourier_transform(scale_argument(f1, N2)), g2 = fourier_transform(scale_argument(f2, N1));
    i64 bad = 0;
    std::string first;
    for (i64 b = 0; b < N * N * N * N; ++b) {
      Form y = form_at(b, N);
      CyclotomicSum r = g1.numerator(form_index(reduce(y, N1), N1)) * g2.numerator(form_index(reduce(y, N2), N2));
      if (!equal(lhs.numerator(b), r) && bad++ == 0) first = form_str(y);
    }
    rep.add("trial " + std::to_string(trial) + " all b in V*_" + std::to_string(N), "0 mismatches",
            bad ? std::to_string(bad) + " mismatches, first at " + first : "0 mismatches", bad == 0);
  }
  return rep;
}

VerificationReport check_inversion(i64 N, const DirichletCharacter& chi, const IdentityOptions& opt) {
  VerificationReport rep;
  rep.name = "inversion N=" + std::to_string(N) + " " + chi.label();
  const auto& dual = shared_partition(N, OrbitPartition::Space::Dual);
  const auto& prim = shared_partition(N, OrbitPartition::Space::Primal);
  std::vector<DualForm> reps;
  for (const auto& o : dual.orbits()) {
    Form y = form_at(o.rep, N);
    reps.push_back({y[0], y[1], y[2], y[3]});
  }
  const i64 G = group_order(N), n4 = N * N * N * N, L = chi.value_order();
  std::mt19937_64 rng(opt.seed);
  auto cinv = chi.conj();
  for (int s = 0; s < opt.samples; ++s) {
    Form a = random_form(N, rng);
    Form ap = s % 2 == 0 ? act_mod(random_group_element(N, rng), a, N) : random_form(N, rng);
    auto Wa = orbital_gauss_sums(chi, a, reps, N, opt.threads);
    Form neg{mod(-ap[0], N), mod(-ap[1], N), mod(-ap[2], N), mod(-ap[3], N)};
    auto Wb = orbital_gauss_sums(cinv, neg, reps, N, opt.threads);
    CyclotomicSum T(1);
    for (std::size_t j = 0; j < reps.size(); ++j) T += Wb[j] * Wa[j] * dual.orbits()[j].size;
    i64 ia = form_index(a, N), ib = form_index(ap, N);
    CyclotomicSum expect(L);
    bool trivial_on_stab = !f_chi_a(chi, a, N).support().empty();
    if (trivial_on_stab && prim.orbit_of(ia) == prim.orbit_of(ib)) {
      i64 dg = mulmod(prim.transporter_det(ib), inverse_mod(prim.transporter_det(ia), N), N);
      i64 orbit = prim.orbits()[static_cast<std::size_t>(prim.orbit_of(ia))].size;
      expect.add(chi.exponent(dg % chi.modulus()), n4 * G * (G / orbit));
    }
    rep.add("a=" + form_str(a) + " a'=" + form_str(ap), render(expect), render(T), equal(T, expect));
  }
  return rep;
}

VerificationReport check_equivariance(i64 N, const DirichletCharacter& chi, int groups, int per_group,
                                      const IdentityOptions& opt) {
  VerificationReport rep;
  rep.name = "equivariance N=" + std::to_string(N) + " " + chi.label();
  std::mt19937_64 rng(opt.seed);
  const i64 L = chi.value_order();
  i64 bad = 0, total = 0;
  std::string first;
  for (int gi = 0; gi < groups; ++gi) {
    Form a = random_form(N, rng);
    Mat2 g1 = random_group_element(N, rng);
    std::vector<DualForm> bs, gbs;
    std::vector<Mat2> g2s;
    for (int k = 0; k < per_group; ++k) {
      Form b = random_form(N, rng);
      Mat2 g2 = random_group_element(N, rng);
      bs.push_back({b[0], b[1], b[2], b[3]});
      gbs.push_back(act_dual_mod(g2, bs.back(), N));
      g2s.push_back(g2);
    }
    auto W = orbital_gauss_sums(chi, a, bs, N, opt.threads);
    auto Wg = orbital_gauss_sums(chi, act_mod(g1, a, N), gbs, N, opt.threads);
    for (int k = 0; k < per_group; ++k) {
      i64 e = -chi.exponent(mod(g1.det(), N) % chi.modulus()) - chi.exponent(mod(g2s[static_cast<std::size_t>(k)].det(), N) % chi.modulus());
      CyclotomicSum rhs = W[static_cast<std::size_t>(k)] * root_of_unity(L, mod(e, L));
      ++total;
      if (!equal(Wg[static_cast<std::size_t>(k)], rhs) && bad++ == 0) first = "a=" + form_str(a);
    }
  }
  rep.add(std::to_string(total) + " triples", "0 mismatches",
          bad ? std::to_string(bad) + " mismatches, first " + first : "0 mismatches", bad == 0 && total > 0);
  return rep;
}

namespace {

// W(chi, a, b) = 0 when chi o det is nontrivial on G_a or on G_b.
VerificationReport check_vanishing(i64 N, const DirichletCharacter& chi, const IdentityOptions& opt) {
  VerificationReport rep;
  rep.name = "vanishing N=" + std::to_string(N) + " " + chi.label();
  std::mt19937_64 rng(opt.seed + 17);
  int found_a = 0, found_b = 0;
  for (int tries = 0; tries < 400 && (found_a < 3 || found_b < 3); ++tries) {
    Form a = random_form(N, rng);
    Form bf = random_form(N, rng);
    DualForm b{bf[0], bf[1], bf[2], bf[3]};
    bool a_side = found_a < 3 && f_chi_a(chi, a, N).support().empty();
    bool b_side = false;
    if (!a_side && found_b < 3) {
      for_each_group_element(N, [&](const Mat2& g, i64 det) {
        if (!b_side && chi.exponent(det % chi.modulus()) != 0 && act_dual_mod(g, b, N) == b) b_side = true;
      });
    }
    if (!a_side && !b_side) continue;
    CyclotomicSum W = orbital_gauss_sum(chi, a, b, N);
    (a_side ? found_a : found_b)++;
    rep.add(std::string(a_side ? "G_a" : "G_b") + " a=" + form_str(a) + " b=" + form_str(bf), "0", render(W),
            W.is_zero());
  }
  if (rep.cells.empty()) rep.note("no sample with a nontrivial character on a stabilizer");
  return rep;
}

}  // namespace

VerificationReport check_identities(i64 N, const DirichletCharacter& chi, const IdentityOptions& opt) {
  VerificationReport rep;
  rep.name = "identities N=" + std::to_string(N);
  rep.merge(check_equivariance(N, chi, std::max(1, opt.samples / 10), 10, opt));
  if (N * N * N * N <= 8'000'000 && group_order(N) <= 200'000) {
    IdentityOptions small = opt;
    small.samples = std::max(2, opt.samples / 4);
    rep.merge(check_inversion(N, chi, small));
    if (!chi.is_trivial() && group_order(N) <= 20'000) rep.merge(check_vanishing(N, chi, opt));
  }
  auto fs = factorize(N);
  if (fs.size() == 1 && fs[0].e == 2) rep.merge(check_reduction(fs[0].p, opt));
  if (fs.size() == 2) {
    rep.merge(check_decomposition(fs[0].q, fs[1].q, opt));
    rep.merge(check_product_fourier(fs[0].q, fs[1].q, opt));
  }
  return rep;
}

}  // namespace bcf
