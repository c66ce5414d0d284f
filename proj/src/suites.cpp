#include "bcf/suites.hpp"

#include <chrono>
#include <set>
#include <sstream>

#include "bcf/densities.hpp"
#include "bcf/errors.hpp"
#include "bcf/gauss.hpp"
#include "bcf/orbits.hpp"
#include "bcf/shintani.hpp"

namespace bcf {

namespace {

std::string ratstr(const Rational& r) { return to_string(r); }

}  // namespace

VerificationReport census_report(i64 p, int e) {
  VerificationReport rep;
  rep.name = "census p=" + std::to_string(p) + " e=" + std::to_string(e);
  for (const auto& [s, entry] : census(p, e))
    rep.add(symbol_name(s), std::to_string(entry.closed_form), std::to_string(entry.count), entry.match);
  return rep;
}

VerificationReport gauss_report(i64 p, const std::string& table, int level, const SuiteOptions& opt) {
  if (table == "mori") return verify_mori_table(p, opt.threads);
  if (table == "singular") return verify_singular_table(p, opt.threads);
  if (table != "fourier") throw DomainError("unknown table '" + table + "'");
  VerificationReport rep;
  rep.name = "fourier p=" + std::to_string(p);
  if (level == 0 || level == 1) rep.merge(verify_fourier_fp(p));
  if (level == 0 || level == 2)
    for (bool with_max : {false, true}) {
      rep.merge(verify_fourier_phi(p, with_max));
      rep.merge(verify_parseval(p, with_max));
    }
  return rep;
}

VerificationReport on_report(i64 X, const SuiteOptions& opt) {
  VerificationReport rep;
  rep.name = "ohno-nakagawa X=" + std::to_string(X);
  EnumerateOptions eo;
  eo.threads = opt.threads;
  eo.flags = false;
  auto hp = class_number_table(X, 1, eo), hm = class_number_table(X, -1, eo);
  auto dp = dual_class_number_table(X, 1, eo), dm = dual_class_number_table(X, -1, eo);
  for (i64 n = 1; n <= X; ++n) {
    // Only n with some nonzero side produce cells, so the report stays proportional to the data.
    if (hp.at(n) == 0 && hm.at(n) == 0 && dp.at(n) == 0 && dm.at(n) == 0) continue;
    rep.add("h*+(" + std::to_string(n) + ") = h-", ratstr(hm.at(n)), ratstr(dp.at(n)), dp.at(n) == hm.at(n));
    Rational three = Rational(3) * hp.at(n);
    rep.add("h*-(" + std::to_string(n) + ") = 3h+", ratstr(three), ratstr(dm.at(n)), dm.at(n) == three);
  }
  return rep;
}

VerificationReport oracle_report(i64 X) {
  VerificationReport rep;
  rep.name = "oracle X=" + std::to_string(X);
  for (int sign : {1, -1}) {
    std::set<std::pair<i64, Form>> seen;
    for (const auto& r : enumerate_classes(X, sign)) {
      std::ostringstream w;
      w << "disc=" << r.disc << " rep=" << r.rep;
      auto o = bfs_canonical_oracle(r.rep);
      bool distinct = seen.emplace(r.disc, o.canonical).second;
      bool ok = !o.inconclusive && distinct && o.stabilizer == r.stabilizer && (r.stabilizer == 1 || r.stabilizer == 3);
      std::ostringstream got;
      got << "stab " << o.stabilizer << (distinct ? "" : " duplicate class") << (o.inconclusive ? " inconclusive" : "");
      rep.add(w.str(), "stab " + std::to_string(r.stabilizer), got.str(), ok);
    }
  }
  return rep;
}

VerificationReport identity_report(const SuiteOptions& opt) {
  VerificationReport rep;
  rep.name = "identities";
  IdentityOptions io;
  io.samples = 8;
  io.seed = opt.seed;
  io.threads = opt.threads;
  rep.merge(check_reduction(5, io));
  rep.merge(check_decomposition(3, 5, io));
  rep.merge(check_product_fourier(3, 5, io));
  for (i64 N : {5, 7}) {
    auto chars = DirichletCharacter::all(N);
    rep.merge(check_inversion(N, chars[0], io));
    rep.merge(check_inversion(N, chars[1], io));
  }
  // Partial zeta coefficients directly and through the character average, every G_5-orbit.
  const i64 X = 500;
  for (int sign : {1, -1}) {
    auto classes = enumerate_classes(X, sign);
    for (const auto& o : shared_partition(5).orbits()) {
      Form a = form_at(o.rep, 5);
      auto direct = partial_zeta_coeffs(classes, a, 5), avg = partial_zeta_via_characters(classes, a, 5);
      int bad = 0;
      for (i64 n = 1; n <= X; ++n)
        bad += !equal(direct.numerator(n) * avg.den, avg.numerator(n) * direct.den);
      std::ostringstream w;
      w << "partial zeta sign=" << (sign > 0 ? "+" : "-") << " a=" << a << " n<=" << X;
      rep.add(w.str(), "0 mismatches", std::to_string(bad) + " mismatches", bad == 0);
    }
  }
  return rep;
}

VerificationReport progression_report(i64 X, const std::vector<i64>& moduli, const SuiteOptions& opt) {
  VerificationReport rep;
  rep.name = "progressions X=" + std::to_string(X);
  EnumerateOptions eo;
  eo.threads = opt.threads;
  eo.flags = false;
  for (int sign : {1, -1}) {
    auto t = class_number_table(X, sign, eo);
    for (i64 N : moduli)
      for (i64 a = 0; a < N; ++a) {
        if (gcd(a, N) != 1) continue;
        double actual = boost::rational_cast<double>(progression_partial_sum(t, N, a, X));
        auto pr = progression_prediction(N, a, static_cast<double>(X), sign);
        double main_only = std::abs(actual - pr.main), both = std::abs(actual - pr.main - pr.secondary);
        std::ostringstream w;
        w << (sign > 0 ? "+" : "-") << " N=" << N << " a=" << a;
        rep.add(w.str(), format_double(pr.main + pr.secondary) + " (main " + format_double(pr.main) + ")",
                format_double(actual), both < main_only);
      }
  }
  rep.note("cells pass when the secondary term reduces the error of the main term alone; informational only");
  return rep;
}

}  // namespace bcf
