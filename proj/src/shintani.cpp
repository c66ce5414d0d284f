#include "bcf/shintani.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "bcf/errors.hpp"
#include "bcf/orbits.hpp"

namespace bcf {

namespace {

using ld = long double;

constexpr ld kEdge = 1e-11L;      // closed-domain tolerance for disc < 0
constexpr ld kInterior = 1e-8L;   // margin beyond which a point is treated as interior

struct FormHash {
  std::size_t operator()(const Form& x) const {
    std::size_t h = 1469598103934665603ull;
    for (int i = 0; i < 4; ++i) h = (h ^ static_cast<std::size_t>(x[i])) * 1099511628211ull;
    return h;
  }
};

const std::vector<Mat2>& small_sl2() {
  static const std::vector<Mat2> S = [] {
    std::vector<Mat2> v;
    for (i64 a = -2; a <= 2; ++a)
      for (i64 b = -2; b <= 2; ++b)
        for (i64 c = -2; c <= 2; ++c)
          for (i64 d = -2; d <= 2; ++d)
            if (a * d - b * c == 1) v.push_back({a, b, c, d});
    return v;
  }();
  return S;
}

bool normalized(const Form& x) { return x[0] > 0 || (x[0] == 0 && x[1] > 0); }
Form negate(const Form& x) { return {-x[0], -x[1], -x[2], -x[3]}; }

ld eval_cubic(const Form& x, ld t) { return ((x[0] * t + x[1]) * t + x[2]) * t + x[3]; }
ld eval_deriv(const Form& x, ld t) { return (3 * x[0] * t + 2 * x[1]) * t + x[2]; }

ld polish(const Form& x, ld t) {
  for (int it = 0; it < 8; ++it) {
    ld fp = eval_deriv(x, t);
    if (fp == 0) break;
    ld step = eval_cubic(x, t) / fp;
    t -= step;
    if (std::fabs(step) <= 1e-19L * (1 + std::fabs(t))) break;
  }
  return t;
}

// Real roots of x(t, 1) with x[0] != 0.
std::vector<ld> real_roots(const Form& x, i128 D) {
  const ld a = x[0], b = x[1], c = x[2], d = x[3];
  const ld p = (3 * a * c - b * b) / (3 * a * a);
  const ld q = (2 * b * b * b - 9 * a * b * c + 27 * a * a * d) / (27 * a * a * a);
  const ld shift = -b / (3 * a);
  std::vector<ld> r;
  if (D < 0) {
    ld disc = q * q / 4 + p * p * p / 27;
    if (disc < 0) disc = 0;
    ld u = std::cbrt(-q / 2 - (q >= 0 ? 1 : -1) * std::sqrt(disc));
    ld y = u == 0 ? 0 : u - p / (3 * u);
    r.push_back(polish(x, y + shift));
  } else {
    ld m = 2 * std::sqrt(std::max<ld>(0, -p / 3));
    ld arg = p == 0 ? 0 : (3 * q / (2 * p)) * std::sqrt(-3 / p);
    arg = std::clamp<ld>(arg, -1, 1);
    ld phi = std::acos(arg) / 3;
    for (int k = 0; k < 3; ++k) r.push_back(polish(x, m * std::cos(phi - 2 * std::numbers::pi_v<ld> * k / 3) + shift));
  }
  return r;
}

// Does the covariant point lie in the closed fundamental domain (with tolerance for disc < 0)?
bool in_closed_domain(const Form& x, i128 D) {
  if (D > 0) {
    Quadratic H = hessian(x);
    return std::abs(H.B) <= H.A && H.A <= H.C;
  }
  auto z = covariant_point(x);
  return std::fabs(z.real()) <= 0.5L + kEdge && std::norm(z) >= 1 - kEdge;
}

bool in_interior(const Form& x, i128 D) {
  if (D > 0) {
    Quadratic H = hessian(x);
    return std::abs(H.B) < H.A && H.A < H.C;
  }
  auto z = covariant_point(x);
  return std::fabs(z.real()) < 0.5L - kInterior && std::norm(z) > 1 + kInterior;
}

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

}  // namespace

std::complex<long double> covariant_point(const Form& x) {
  i128 D = disc128(x);
  if (D == 0) throw DomainError("covariant_point: discriminant is zero");
  if (D > 0) {
    Quadratic H = hessian(x);
    ld A = H.A, B = H.B, C = H.C;
    return {-B / (2 * A), std::sqrt(4 * A * C - B * B) / (2 * std::fabs(A))};
  }
  std::complex<ld> z;
  if (x[0] == 0) {
    ld b = x[1], c = x[2], d = x[3];
    z = {-c / (2 * b), std::sqrt(std::max<ld>(0, 4 * b * d - c * c)) / (2 * b)};
  } else {
    ld th = real_roots(x, D)[0];
    ld P = static_cast<ld>(x[1]) / x[0] + th;
    ld R = static_cast<ld>(x[2]) / x[0] + th * P;
    z = {-P / 2, std::sqrt(std::max<ld>(0, 4 * R - P * P)) / 2};
  }
  if (z.imag() < 0) z = std::conj(z);
  return z;
}

Form reduce_form(const Form& x) {
  i128 D = disc128(x);
  if (D == 0) throw DomainError("reduce_form: discriminant is zero");
  const Mat2 S{0, -1, 1, 0};
  Form y = x;
  for (int it = 0; it < 100000; ++it) {
    if (D > 0) {
      Quadratic H = hessian(y);
      if (std::abs(H.B) > H.A) {
        // Re z = -B / 2A; shift it to the nearest integer.
        i64 k = floor_div(-H.B + H.A, 2 * H.A);
        y = act(Mat2{1, 0, k, 1}, y);
      } else if (H.A > H.C) {
        y = act(S, y);
      } else {
        return y;
      }
    } else {
      auto z = covariant_point(y);
      if (std::fabs(z.real()) > 0.5L + kEdge) {
        i64 k = std::llround(z.real());
        y = act(Mat2{1, 0, k, 1}, y);
      } else if (std::norm(z) < 1 - kEdge) {
        y = act(S, y);
      } else {
        return y;
      }
    }
  }
  throw std::logic_error("reduce_form: no convergence");
}

Canonical canonicalize(const Form& x) {
  i128 D = disc128(x);
  Form r = reduce_form(x);
  if (in_interior(r, D)) return {normalized(r) ? r : negate(r), 1};
  std::optional<Form> best;
  int stab = 0;
  for (const Mat2& k : small_sl2()) {
    Form y = act(k, r);
    if (!in_closed_domain(y, D)) continue;
    if (y == r) ++stab;
    if (normalized(y) && (!best || y < *best)) best = y;
  }
  if (!best || stab == 0) throw std::logic_error("canonicalize: empty boundary orbit");
  return {*best, stab};
}

bool is_reducible(const Form& x) {
  if (x[0] == 0 || x[3] == 0) return true;
  i128 D = disc128(x);
  if (D == 0) return true;
  std::vector<i64> ss = divisors(std::abs(x[0]));
  for (ld th : real_roots(x, D))
    for (i64 s : ss) {
      ld approx = th * s;
      if (std::fabs(approx) > 4e18L) continue;
      i64 r0 = std::llround(approx);
      for (i64 r = r0 - 1; r <= r0 + 1; ++r)
        if (evaluate(x, r, s) == 0) return true;
    }
  return false;
}

std::uint8_t maximality_mask(const Form& x) {
  static const std::vector<TypeClassifier> cls = [] {
    std::vector<TypeClassifier> v;
    for (i64 p : kMaximalityPrimes) v.emplace_back(p);
    return v;
  }();
  std::uint8_t m = 0;
  for (std::size_t i = 0; i < kMaximalityPrimes.size(); ++i) {
    i64 p = kMaximalityPrimes[i];
    if (!is_nonmaximal(cls[i].level2(reduce(x, p * p)))) m |= static_cast<std::uint8_t>(1u << i);
  }
  return m;
}

namespace {

struct Found {
  Form rep;
  i64 disc;
  int stab;
};

void emit(const Form& x, i64 X, int sign, std::vector<Found>& out) {
  i128 D = disc128(x);
  if (D == 0 || (sign > 0 ? D < 0 : D > 0) || (D > 0 ? D : -D) > X) return;
  Canonical c = canonicalize(x);
  out.push_back({c.rep, static_cast<i64>(D), c.stabilizer});
}

// disc > 0: forms with reduced Hessian (|B| <= A <= C), a > 0 or a = 0 < b.
void enumerate_positive(i64 X, int worker, int workers, std::vector<Found>& out) {
  const ld X4 = std::pow(static_cast<ld>(X), 0.25L);
  const i64 Amax = static_cast<i64>(std::floor(std::sqrt(static_cast<ld>(X)))) + 1;
  // 4A^3 = G^2 + 27 D a^2 and A <= sqrt(D) give a^2 <= 4 sqrt(D) / 27.
  const i64 amax = static_cast<i64>(std::floor(std::sqrt(4 * std::sqrt(static_cast<ld>(X)) / 27))) + 1;
  for (i64 a = 1 + worker; a <= amax; a += workers) {
    const i64 bmax = static_cast<i64>(1.5L * a + 2.4L * X4) + 2;
    for (i64 b = -bmax; b <= bmax; ++b) {
      i64 A0 = mod(b * b, 3 * a);
      if (A0 == 0) A0 = 3 * a;
      for (i64 A = A0; A <= Amax; A += 3 * a) {
        if (27 * a * a > 4 * A * A * A) continue;
        const i64 c = (b * b - A) / (3 * a);
        const i64 dlo = -floor_div(-(b * c - A), 9 * a), dhi = floor_div(b * c + A, 9 * a);
        for (i64 d = dlo; d <= dhi; ++d) {
          const i64 B = b * c - 9 * a * d, C = c * c - 3 * b * d;
          if (C < A) continue;
          const i64 D3 = 4 * A * C - B * B;
          if (D3 <= 0 || D3 > 3 * X) continue;
          emit({a, b, c, d}, X, 1, out);
        }
      }
    }
  }
  if (worker != 0) return;
  for (i64 b = 1; b * b <= Amax; ++b)
    for (i64 c = -b; c <= b; ++c) {
      // D = b^2 (c^2 - 4bd) in (0, X].
      const i64 dlo = -floor_div(-(c * c * b * b - X), 4 * b * b * b), dhi = floor_div(c * c - 1, 4 * b);
      for (i64 d = dlo; d <= dhi; ++d) {
        if (c * c - 3 * b * d < b * b) continue;
        emit({0, b, c, d}, X, 1, out);
      }
    }
}

// disc < 0: complex root in the fundamental domain.
void enumerate_negative(i64 X, int worker, int workers, std::vector<Found>& out) {
  const ld Xl = static_cast<ld>(X);
  const i64 amax = static_cast<i64>(std::pow(16 * Xl / 27, 0.25L)) + 1;
  for (i64 a = 1 + worker; a <= amax; a += workers) {
    const ld a4 = static_cast<ld>(a) * a * a * a;
    const ld tmax = std::pow(Xl / (3 * a4), 0.25L), ymax = std::pow(Xl / (4 * a4), 1.0L / 6);
    const i64 bmax = static_cast<i64>(a * (tmax + 1.5L)) + 1;
    const i64 clo = static_cast<i64>(std::floor(a * (0.75L - tmax))) - 1;
    const i64 chi = static_cast<i64>(std::ceil(a * (0.75L + ymax * ymax + tmax))) + 1;
    for (i64 b = -bmax; b <= bmax; ++b)
      for (i64 c = clo; c <= chi; ++c) {
        // D(d) = -27a^2 d^2 + (18abc - 4b^3) d + (b^2c^2 - 4ac^3).
        const ld qa = 27.0L * a * a, qb = 18.0L * a * b * c - 4.0L * b * b * b,
                 qc = static_cast<ld>(b) * b * c * c - 4.0L * a * c * c * c;
        auto roots = [&](ld k, ld& lo, ld& hi) {
          // qa d^2 - qb d - (qc + k) <= 0
          ld disc = qb * qb + 4 * qa * (qc + k);
          if (disc < 0) return false;
          ld s = std::sqrt(disc);
          lo = (qb - s) / (2 * qa);
          hi = (qb + s) / (2 * qa);
          return true;
        };
        ld r1, r2, s1, s2;
        if (!roots(Xl, r1, r2)) continue;
        const i64 lo = static_cast<i64>(std::floor(r1)) - 1, hi = static_cast<i64>(std::ceil(r2)) + 1;
        i64 skip_lo = hi + 1, skip_hi = hi;  // empty skip range
        if (roots(0, s1, s2)) {
          skip_lo = static_cast<i64>(std::ceil(s1)) + 1;
          skip_hi = static_cast<i64>(std::floor(s2)) - 1;
        }
        for (i64 d = lo; d <= hi; ++d) {
          if (d >= skip_lo && d <= skip_hi) {
            d = skip_hi;
            continue;
          }
          emit({a, b, c, d}, X, -1, out);
        }
      }
  }
  if (worker != 0) return;
  const i64 bmax = static_cast<i64>(std::pow(Xl / 3, 0.25L)) + 1;
  for (i64 b = 1; b <= bmax; ++b)
    for (i64 c = -b; c <= b; ++c) {
      const i64 dhi = floor_div(X / (b * b) + c * c, 4 * b) + 1;
      for (i64 d = std::max(b, -floor_div(-(c * c + 1), 4 * b)); d <= dhi; ++d) emit({0, b, c, d}, X, -1, out);
    }
}

}  // namespace

std::vector<ClassRecord> enumerate_classes(i64 X, int sign, const EnumerateOptions& opt) {
  if (X < 1) throw DomainError("enumerate_classes: X must be positive");
  if (X > kMaxDiscBound)
    throw ResourceLimit("enumerate_classes: X = " + std::to_string(X) + " exceeds the desk-scale bound " +
                        std::to_string(kMaxDiscBound));
  if (sign != 1 && sign != -1) throw DomainError("enumerate_classes: sign must be +1 or -1");
  const int W = std::max(1, opt.threads);
  std::vector<std::vector<Found>> parts(static_cast<std::size_t>(W));
  auto run = [&](int w) {
    if (sign > 0)
      enumerate_positive(X, w, W, parts[static_cast<std::size_t>(w)]);
    else
      enumerate_negative(X, w, W, parts[static_cast<std::size_t>(w)]);
  };
  if (W == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < W; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  std::vector<Found> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  auto key = [](const Found& f) { return std::make_pair(f.disc < 0 ? -f.disc : f.disc, f.rep); };
  std::sort(all.begin(), all.end(), [&](const Found& u, const Found& v) { return key(u) < key(v); });
  all.erase(std::unique(all.begin(), all.end(), [](const Found& u, const Found& v) { return u.rep == v.rep; }),
            all.end());
  std::vector<ClassRecord> out;
  out.reserve(all.size());
  for (const auto& f : all) {
    ClassRecord r{f.rep, f.disc, f.stab, false, 0};
    if (opt.flags) {
      r.reducible = is_reducible(f.rep);
      r.maximal_mask = maximality_mask(f.rep);
    }
    out.push_back(r);
  }
  return out;
}

OracleResult bfs_canonical_oracle(const Form& x, i64 H, i64 visit_cap) {
  i128 D = disc128(x);
  if (D == 0) throw DomainError("bfs_canonical_oracle: discriminant is zero");
  auto height = [](const Form& y) {
    i64 h = 0;
    for (int i = 0; i < 4; ++i) h = std::max(h, std::abs(y[i]));
    return h;
  };
  if (H <= 0) {
    ld q = std::pow(static_cast<ld>(D < 0 ? -D : D), 0.25L);
    H = 20 * std::max<i64>(height(x), static_cast<i64>(std::ceil(q)));
  }
  OracleResult res;
  if (height(x) > H) {
    res.inconclusive = true;
    return res;
  }
  const std::array<Mat2, 4> gens{Mat2{1, 1, 0, 1}, Mat2{1, -1, 0, 1}, Mat2{0, -1, 1, 0}, Mat2{0, 1, -1, 0}};
  std::unordered_map<Form, Mat2, FormHash> seen{{x, Mat2{}}};
  std::vector<Form> queue{x};
  std::set<std::array<i64, 4>> stab{{1, 0, 0, 1}};
  // Ordered by (height, coefficients): plain lexicographic minima drift to the height cap.
  auto key = [&](const Form& y) { return std::make_pair(height(y), y); };
  Form best = x;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const Form y = queue[h];
    const Mat2 My = seen[y];
    for (const Mat2& g : gens) {
      Form z = act(g, y);
      if (height(z) > H) continue;
      Mat2 Mz = g * My;
      auto it = seen.find(z);
      if (it == seen.end()) {
        if (static_cast<i64>(seen.size()) >= visit_cap) {
          res.inconclusive = true;
          continue;
        }
        seen.emplace(z, Mz);
        queue.push_back(z);
        if (key(z) < key(best)) best = z;
      } else {
        // M_old^-1 * M_new fixes x.
        const Mat2& Mo = it->second;
        Mat2 inv{Mo.d, -Mo.b, -Mo.c, Mo.a};
        Mat2 s = inv * Mz;
        if (act(s, x) == x) stab.insert({s.a, s.b, s.c, s.d});
      }
    }
  }
  res.canonical = best;
  res.visited = static_cast<i64>(seen.size());
  res.stabilizer = static_cast<int>(stab.size());
  return res;
}

// ---------------------------------------------------------------------------------------------
// Tables

Rational ClassNumberTable::at(i64 n) const {
  auto it = h.find(n);
  return it == h.end() ? Rational(0) : it->second;
}

Rational ClassNumberTable::total() const {
  Rational s(0);
  for (const auto& [n, v] : h) s += v;
  return s;
}

namespace {
nlohmann::json make_meta(i64 X, int sign, bool dual, std::size_t classes) {
  return {{"X", X}, {"sign", sign > 0 ? "+" : "-"}, {"dual", dual}, {"classes", classes}, {"version", kTableVersion}};
}
}  // namespace

ClassNumberTable class_number_table(const std::vector<ClassRecord>& classes, i64 X, int sign) {
  ClassNumberTable t;
  t.sign = sign;
  t.X = X;
  std::size_t used = 0;
  for (const auto& r : classes) {
    if ((sign > 0) != (r.disc > 0)) continue;
    i64 n = std::abs(r.disc);
    if (n > X) continue;
    t.h[n] += Rational(1, r.stabilizer);
    ++used;
  }
  t.meta = make_meta(X, sign, false, used);
  return t;
}

ClassNumberTable class_number_table(i64 X, int sign, const EnumerateOptions& opt) {
  EnumerateOptions o = opt;
  o.flags = false;
  return class_number_table(enumerate_classes(X, sign, o), X, sign);
}

ClassNumberTable dual_class_number_table(const std::vector<ClassRecord>& classes, i64 X, int sign) {
  ClassNumberTable t;
  t.sign = sign;
  t.X = X;
  t.dual = true;
  std::size_t used = 0;
  for (const auto& r : classes) {
    if ((sign > 0) != (r.disc > 0)) continue;
    if (mod(r.rep[1], 3) != 0 || mod(r.rep[2], 3) != 0) continue;
    i64 n = std::abs(r.disc);
    if (n % 27 != 0) throw std::logic_error("dual table: discriminant of a sublattice form not divisible by 27");
    n /= 27;
    if (n > X) continue;
    t.h[n] += Rational(1, r.stabilizer);
    ++used;
  }
  t.meta = make_meta(X, sign, true, used);
  return t;
}

ClassNumberTable dual_class_number_table(i64 X, int sign, const EnumerateOptions& opt) {
  EnumerateOptions o = opt;
  o.flags = false;
  return dual_class_number_table(enumerate_classes(27 * X, sign, o), X, sign);
}

CyclotomicSum CoefficientTable::numerator(i64 n) const {
  auto it = c.find(n);
  return it == c.end() ? CyclotomicSum(1) : it->second;
}

void validate_invariance(const FiniteFunction& f, unsigned seed, int samples) {
  const i64 N = f.modulus();
  const std::array<Mat2, 2> gens{Mat2{1, 1 % N, 0, 1 % N}, Mat2{1 % N, 0, 1 % N, 1 % N}};
  auto check = [&](i64 idx) {
    Form x = form_at(idx, N);
    for (const auto& g : gens) {
      i64 j = form_index(act_mod_fast(g, 1 % N, x, N), N);
      if (!equal(f.numerator(j), f.numerator(idx))) {
        std::ostringstream os;
        os << "function is not SL2(Z/" << N << ")-invariant: g = (" << g.a << "," << g.b << ";" << g.c << "," << g.d
           << "), a = " << x;
        throw ContractViolation(os.str());
      }
    }
  };
  for (const auto& [idx, v] : f.support()) check(idx);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<i64> d(0, N * N * N * N - 1);
  for (int s = 0; s < samples; ++s) check(d(rng));
}

CoefficientTable weighted_coeffs_fn(const std::vector<ClassRecord>& classes, i64 N,
                                    const std::function<CyclotomicSum(const Form&)>& w) {
  CoefficientTable t;
  t.den = 3;
  for (const auto& r : classes) {
    CyclotomicSum v = w(reduce(r.rep, N));
    if (v.is_zero()) continue;
    auto it = t.c.find(std::abs(r.disc));
    CyclotomicSum add = v * (3 / r.stabilizer);
    if (it == t.c.end())
      t.c.emplace(std::abs(r.disc), add);
    else
      it->second += add;
  }
  return t;
}

CoefficientTable weighted_coeffs(const std::vector<ClassRecord>& classes, const FiniteFunction& f, bool validate) {
  if (validate) validate_invariance(f);
  const i64 N = f.modulus();
  CoefficientTable t = weighted_coeffs_fn(classes, N, [&](const Form& x) { return f.numerator(form_index(x, N)); });
  t.den *= f.denominator();
  return t;
}

FiniteFunction divisibility_indicator(i64 m) {
  FiniteFunction f(m);
  for (i64 i = 0; i < m * m * m * m; ++i)
    if (disc_mod(form_at(i, m), m) == 0) f.set_integer(i, 1);
  return f;
}

CoefficientTable divisible_coeffs(const std::vector<ClassRecord>& classes, i64 m) {
  return weighted_coeffs(classes, divisibility_indicator(m));
}

CoefficientTable theta_coeffs(const std::vector<ClassRecord>& classes, i64 N) {
  CoefficientTable t;
  t.den = 3;
  for (i64 m : divisors(N)) {
    int mu = mobius(m);
    if (mu == 0) continue;
    CoefficientTable xm = divisible_coeffs(classes, m);
    for (const auto& [n, v] : xm.c) {
      CyclotomicSum add = v * (mu * m);
      auto it = t.c.find(n);
      if (it == t.c.end())
        t.c.emplace(n, add);
      else
        it->second += add;
    }
  }
  return t;
}

CoefficientTable partial_zeta_coeffs(const std::vector<ClassRecord>& classes, const Form& a, i64 N) {
  const auto& part = shared_partition(N, OrbitPartition::Space::Primal, true);
  const auto o = part.orbit_of(form_index(reduce(a, N), N));
  const i64 size = part.orbits()[static_cast<std::size_t>(o)].size;
  CoefficientTable t = weighted_coeffs_fn(classes, N, [&](const Form& x) {
    return CyclotomicSum::integer(1, part.orbit_of(form_index(x, N)) == o ? 1 : 0);
  });
  t.den *= size;
  return t;
}

CoefficientTable partial_zeta_via_characters(const std::vector<ClassRecord>& classes, const Form& a, i64 N) {
  CoefficientTable t;
  for (const auto& chi : DirichletCharacter::all(N)) {
    CoefficientTable w = weighted_coeffs(classes, f_chi_a(chi, a, N));
    t.den = w.den;
    for (const auto& [n, v] : w.c) {
      auto it = t.c.find(n);
      if (it == t.c.end())
        t.c.emplace(n, v);
      else
        it->second += v;
    }
  }
  t.den *= group_order(N);
  return t;
}

CoefficientTable twisted_coeffs(const std::vector<ClassRecord>& classes, i64 r, const DirichletCharacter& chi) {
  if (r < 1) throw DomainError("twisted_coeffs: r must be positive");
  const i64 m = chi.modulus(), L = chi.value_order();
  CoefficientTable t;
  t.den = 3;
  for (const auto& rec : classes) {
    if (rec.disc % r != 0) continue;
    i64 e = chi.exponent(mod(rec.disc / r, m));
    if (e < 0) continue;
    CyclotomicSum v(L);
    v.add(e, 3 / rec.stabilizer);
    auto it = t.c.find(std::abs(rec.disc));
    if (it == t.c.end())
      t.c.emplace(std::abs(rec.disc), v);
    else
      it->second += v;
  }
  return t;
}

Rational progression_partial_sum(const ClassNumberTable& t, i64 N, i64 a, i64 X) {
  if (N < 1) throw DomainError("progression_partial_sum: N must be positive");
  if (X > t.X) throw DomainError("progression_partial_sum: X exceeds the table bound");
  Rational s(0);
  for (const auto& [n, v] : t.h) {
    if (n > X) break;
    if (mod(n - a, N) == 0) s += v;
  }
  return s;
}

nlohmann::json table_to_json(const ClassNumberTable& t) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [n, v] : t.h) j[std::to_string(n)] = {{"num", v.numerator()}, {"den", v.denominator()}};
  return j;
}

ClassNumberTable table_from_json(const nlohmann::json& j) {
  ClassNumberTable t;
  for (const auto& [k, v] : j.items()) {
    i64 n = std::stoll(k);
    t.h[n] = Rational(v.at("num").get<i64>(), v.at("den").get<i64>());
    t.X = std::max(t.X, n);
  }
  return t;
}

nlohmann::json coefficients_to_json(const CoefficientTable& t) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [n, v] : t.c) {
    if (auto q = v.as_integer()) {
      Rational r(static_cast<i64>(*q), t.den);
      j[std::to_string(n)] = {{"num", r.numerator()}, {"den", r.denominator()}};
    } else {
      auto z = v.value() / static_cast<double>(t.den);
      j[std::to_string(n)] = {{"re", z.real()}, {"im", z.imag()}};
    }
  }
  return j;
}

namespace {
struct RawRecord {
  std::int64_t rep[4];
  std::int64_t disc;
  std::int32_t stabilizer;
  std::uint8_t reducible;
  std::uint8_t mask;
  std::uint8_t pad[2];
};
static_assert(sizeof(RawRecord) == 48);
}  // namespace

void save_classes(const std::vector<ClassRecord>& classes, i64 X, int sign, const std::string& prefix) {
  std::ofstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write " + prefix + ".bin");
  for (const auto& r : classes) {
    RawRecord raw{};
    for (int i = 0; i < 4; ++i) raw.rep[i] = r.rep[i];
    raw.disc = r.disc;
    raw.stabilizer = r.stabilizer;
    raw.reducible = r.reducible;
    raw.mask = r.maximal_mask;
    bin.write(reinterpret_cast<const char*>(&raw), sizeof raw);
  }
  nlohmann::json m = make_meta(X, sign, false, classes.size());
  m["record_bytes"] = sizeof(RawRecord);
  m["order"] = "(|disc|, rep)";
  m["maximality_primes"] = kMaximalityPrimes;
  std::ofstream(prefix + ".json") << m.dump(2) << '\n';
}

std::vector<ClassRecord> load_classes(const std::string& prefix, i64* X, int* sign) {
  std::ifstream mf(prefix + ".json");
  if (!mf) throw std::runtime_error("cannot read " + prefix + ".json");
  nlohmann::json m = nlohmann::json::parse(mf);
  if (m.at("version") != kTableVersion) throw std::runtime_error("class table version mismatch");
  if (X) *X = m.at("X").get<i64>();
  if (sign) *sign = m.at("sign") == "+" ? 1 : -1;
  std::ifstream bin(prefix + ".bin", std::ios::binary);
  std::vector<ClassRecord> out;
  RawRecord raw;
  while (bin.read(reinterpret_cast<char*>(&raw), sizeof raw))
    out.push_back({{raw.rep[0], raw.rep[1], raw.rep[2], raw.rep[3]}, raw.disc, raw.stabilizer, raw.reducible != 0,
                   raw.mask});
  if (out.size() != m.at("classes").get<std::size_t>()) throw std::runtime_error("class table is truncated");
  return out;
}

}  // namespace bcf
