#include "bcf/characters.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "bcf/errors.hpp"

namespace bcf {

RootOfUnity RootOfUnity::normalized() const {
  i64 kk = mod(k, order);
  i64 g = gcd(kk, order);
  if (kk == 0) return {1, 0};
  return {order / g, kk / g};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
  i64 L = lcm(order, o.order);
  return RootOfUnity{L, mod(k * (L / order) + o.k * (L / o.order), L)}.normalized();
}

RootOfUnity RootOfUnity::pow(i64 n) const { return RootOfUnity{order, mod128(static_cast<i128>(k) * n, order)}.normalized(); }

bool RootOfUnity::operator==(const RootOfUnity& o) const {
  auto a = normalized(), b = o.normalized();
  return a.order == b.order && a.k == b.k;
}

std::complex<double> RootOfUnity::value() const {
  double t = 2.0 * std::numbers::pi * static_cast<double>(mod(k, order)) / static_cast<double>(order);
  return {std::cos(t), std::sin(t)};
}

namespace {

struct GroupData {
  i64 m;
  std::vector<DirichletCharacter::Factor> factors;
  i64 exponent;               // lcm of factor orders
  std::vector<i64> logs;      // logs[t * F + j], or -1 for non-units
};

i64 primitive_root(i64 q, i64 p) {
  i64 phi = (q / p) * (p - 1);
  auto fs = factorize(phi);
  for (i64 g = 2; g < q; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (const auto& f : fs)
      if (pow_mod(g, phi / f.p, q) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return 1;  // q == 2
}

const GroupData& group_data(i64 m) {
  static std::map<i64, std::shared_ptr<GroupData>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return *it->second;
  auto gd = std::make_shared<GroupData>();
  gd->m = m;
  for (const auto& f : factorize(m)) {
    if (f.p == 2) {
      if (f.e == 2) gd->factors.push_back({2, f.q, 3, 2});
      if (f.e >= 3) {
        gd->factors.push_back({2, f.q, f.q - 1, 2});
        gd->factors.push_back({2, f.q, 5, f.q / 4});
      }
    } else {
      gd->factors.push_back({f.p, f.q, primitive_root(f.q, f.p), (f.q / f.p) * (f.p - 1)});
    }
  }
  gd->exponent = 1;
  for (const auto& f : gd->factors) gd->exponent = lcm(gd->exponent, f.order);
  std::size_t F = gd->factors.size();
  gd->logs.assign(static_cast<std::size_t>(m) * F, -1);
  // Per prime power: discrete log tables.
  std::map<i64, std::vector<std::vector<i64>>> local;  // q -> per factor table of size q
  for (const auto& pp : factorize(m)) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < F; ++j)
      if (gd->factors[j].q == pp.q) idx.push_back(j);
    std::vector<std::vector<i64>> tables(idx.size(), std::vector<i64>(static_cast<std::size_t>(pp.q), -1));
    if (idx.size() == 1) {
      const auto& f = gd->factors[idx[0]];
      i64 x = 1;
      for (i64 k = 0; k < f.order; ++k) {
        tables[0][static_cast<std::size_t>(x)] = k;
        x = x * f.generator % pp.q;
      }
    } else if (idx.size() == 2) {
      const auto& f1 = gd->factors[idx[0]];
      const auto& f2 = gd->factors[idx[1]];
      i64 s = 1;
      for (i64 a = 0; a < f1.order; ++a) {
        i64 x = s;
        for (i64 b = 0; b < f2.order; ++b) {
          tables[0][static_cast<std::size_t>(x)] = a;
          tables[1][static_cast<std::size_t>(x)] = b;
          x = x * f2.generator % pp.q;
        }
        s = s * f1.generator % pp.q;
      }
    }
    local[pp.q] = std::move(tables);
  }
  for (i64 t = 0; t < m; ++t) {
    if (gcd(t, m) != 1) continue;
    for (const auto& [q, tables] : local) {
      std::size_t pos = 0;
      for (std::size_t j = 0; j < F; ++j) {
        if (gd->factors[j].q != q) continue;
        gd->logs[static_cast<std::size_t>(t) * F + j] = tables[pos++][static_cast<std::size_t>(t % q)];
      }
    }
  }
  return *cache.emplace(m, gd).first->second;
}

}  // namespace

std::vector<DirichletCharacter::Factor> DirichletCharacter::factors(i64 m) { return group_data(m).factors; }

DirichletCharacter::DirichletCharacter(i64 m, std::vector<i64> exponents) : m_(m), a_(std::move(exponents)) {
  if (m < 1) throw DomainError("character modulus must be positive");
  const auto& gd = group_data(m);
  if (a_.size() != gd.factors.size()) throw DomainError("character exponent vector has wrong length");
  L_ = gd.exponent;
  std::size_t F = gd.factors.size();
  for (std::size_t j = 0; j < F; ++j) a_[j] = mod(a_[j], gd.factors[j].order);
  auto vals = std::make_shared<std::vector<i64>>(static_cast<std::size_t>(m), -1);
  for (i64 t = 0; t < m; ++t) {
    if (gcd(t, m) != 1) continue;
    i64 k = 0;
    for (std::size_t j = 0; j < F; ++j)
      k += a_[j] * gd.logs[static_cast<std::size_t>(t) * F + j] % gd.factors[j].order * (L_ / gd.factors[j].order);
    (*vals)[static_cast<std::size_t>(t)] = mod(k, L_);
  }
  values_ = vals;
}

DirichletCharacter DirichletCharacter::trivial(i64 m) {
  return DirichletCharacter(m, std::vector<i64>(group_data(m).factors.size(), 0));
}

std::vector<DirichletCharacter> DirichletCharacter::all(i64 m) {
  const auto& fs = group_data(m).factors;
  std::vector<DirichletCharacter> out;
  std::vector<i64> a(fs.size(), 0);
  while (true) {
    out.emplace_back(m, a);
    std::size_t j = fs.size();
    while (j > 0) {
      --j;
      if (++a[j] < fs[j].order) break;
      a[j] = 0;
      if (j == 0) return out;
    }
    if (fs.empty()) return out;
  }
}

i64 DirichletCharacter::exponent(i64 t) const { return (*values_)[static_cast<std::size_t>(mod(t, m_))]; }

std::optional<RootOfUnity> DirichletCharacter::value(i64 t) const {
  i64 k = exponent(t);
  if (k < 0) return std::nullopt;
  return RootOfUnity{L_, k}.normalized();
}

std::complex<double> DirichletCharacter::operator()(i64 t) const {
  auto v = value(t);
  return v ? v->value() : std::complex<double>(0.0, 0.0);
}

i64 DirichletCharacter::order() const {
  i64 o = 1;
  const auto& fs = group_data(m_).factors;
  for (std::size_t j = 0; j < fs.size(); ++j) o = lcm(o, fs[j].order / gcd(a_[j], fs[j].order));
  return o;
}

DirichletCharacter DirichletCharacter::pow(i64 n) const {
  std::vector<i64> b = a_;
  for (auto& v : b) v *= n;
  return DirichletCharacter(m_, b);
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& o) const {
  if (o.m_ != m_) throw DomainError("product of characters with different moduli");
  std::vector<i64> b = a_;
  for (std::size_t j = 0; j < b.size(); ++j) b[j] += o.a_[j];
  return DirichletCharacter(m_, b);
}

DirichletCharacter DirichletCharacter::p_part(i64 p) const {
  const auto& fs = group_data(m_).factors;
  i64 q = 1;
  for (const auto& f : factorize(m_))
    if (f.p == p) q = f.q;
  std::vector<i64> b;
  for (std::size_t j = 0; j < fs.size(); ++j)
    if (fs[j].p == p) b.push_back(a_[j]);
  return DirichletCharacter(q, b);
}

DirichletCharacter DirichletCharacter::prime_to_p_part(i64 p) const {
  const auto& fs = group_data(m_).factors;
  i64 q = m_;
  for (const auto& f : factorize(m_))
    if (f.p == p) q = m_ / f.q;
  std::vector<i64> b;
  for (std::size_t j = 0; j < fs.size(); ++j)
    if (fs[j].p != p) b.push_back(a_[j]);
  return DirichletCharacter(q, b);
}

namespace {

// Conductor exponent of a character mod p^e.
int local_conductor_exponent(const DirichletCharacter& psi, i64 p, int e) {
  i64 q = psi.modulus();
  for (int f = 0; f <= e; ++f) {
    i64 pf = ipow(p, f);
    bool trivial = true;
    for (i64 t = 1; t < q && trivial; t += pf)
      if (gcd(t, q) == 1 && psi.exponent(t) != 0) trivial = false;
    if (trivial) return f;
  }
  return e;
}

}  // namespace

i64 DirichletCharacter::conductor() const {
  i64 c = 1;
  for (const auto& f : factorize(m_)) c *= ipow(f.p, local_conductor_exponent(p_part(f.p), f.p, f.e));
  return c;
}

DirichletCharacter DirichletCharacter::primitive() const {
  i64 f = conductor();
  if (f == m_) return *this;
  const auto& fs = group_data(f).factors;
  auto mf = factorize(m_);
  std::vector<i64> b;
  for (const auto& fac : fs) {
    // Lift the generator to a unit mod m that is 1 at primes outside the conductor.
    std::vector<i64> res, mods;
    for (const auto& pp : mf) {
      mods.push_back(pp.q);
      res.push_back(pp.p == fac.p ? fac.generator % pp.q : 1);
    }
    i64 t = crt(res, mods);
    i64 k = exponent(t);
    // chi(t) = zeta_L^k must equal zeta_order^b.
    if ((k * fac.order) % L_ != 0) throw DomainError("primitive: inconsistent character data");
    b.push_back(k * fac.order / L_);
  }
  return DirichletCharacter(f, b);
}

std::string DirichletCharacter::label() const {
  std::string s = "chi_" + std::to_string(m_) + "[";
  for (std::size_t j = 0; j < a_.size(); ++j) s += (j ? "," : "") + std::to_string(a_[j]);
  return s + "]";
}

CyclotomicSum gauss_sum(const DirichletCharacter& chi) {
  i64 m = chi.modulus(), L = chi.value_order();
  i64 M = lcm(L, m);
  CyclotomicSum s(M);
  for (i64 t = 0; t < m; ++t) {
    i64 k = chi.exponent(t);
    if (k >= 0) s.add(k * (M / L) + t * (M / m));
  }
  return s;
}

CyclotomicSum jacobi_sum(const DirichletCharacter& chi1, const DirichletCharacter& chi2) {
  i64 p = chi1.modulus();
  if (chi2.modulus() != p || !is_prime(p)) throw DomainError("jacobi_sum: characters must share a prime modulus");
  i64 L = chi1.value_order();
  CyclotomicSum s(L);
  for (i64 t = 0; t < p; ++t) {
    i64 k1 = chi1.exponent(t), k2 = chi2.exponent(1 - t);
    if (k1 >= 0 && k2 >= 0) s.add(k1 + k2);
  }
  return s;
}

int conductor_exponent(const DirichletCharacter& chi, i64 p) {
  i64 c = chi.conductor();
  int e = 0;
  while (c % p == 0) {
    c /= p;
    ++e;
  }
  return e;
}

RootOfUnity chi_tilde_at_p(const DirichletCharacter& chi, i64 p) {
  DirichletCharacter prim = chi.primitive();
  DirichletCharacter rest = prim.prime_to_p_part(p);
  auto v = rest.value(p);
  if (!v) throw DomainError("chi_tilde_at_p: p divides the prime-to-p conductor");
  return v->inverse();
}

RootOfUnity lift_chi_p(const DirichletCharacter& chi, const PadicUnitClass& y) {
  if (y.unit % y.p == 0) throw DomainError("lift_chi_p: unit part divisible by p");
  DirichletCharacter prim = chi.primitive();
  DirichletCharacter local = prim.p_part(y.p);
  int c = conductor_exponent(chi, y.p);
  if (y.precision < c) throw DomainError("lift_chi_p: unit known to insufficient precision");
  RootOfUnity u{1, 0};
  if (c > 0) u = *local.value(y.unit);
  return u * chi_tilde_at_p(chi, y.p).pow(y.ord);
}

std::vector<Form> crt_split(const Form& x, const std::vector<i64>& moduli) {
  std::vector<Form> out;
  for (i64 n : moduli) out.push_back(reduce(x, n));
  return out;
}

Form crt_combine(const std::vector<Form>& parts, const std::vector<i64>& moduli) {
  Form r;
  for (int i = 0; i < 4; ++i) {
    std::vector<i64> res;
    for (const auto& f : parts) res.push_back(f[i]);
    r[i] = crt(res, moduli);
  }
  return r;
}

}  // namespace bcf
