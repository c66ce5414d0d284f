#include "bcf/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "bcf/densities.hpp"
#include "bcf/errors.hpp"
#include "bcf/orbits.hpp"
#include "bcf/shintani.hpp"
#include "bcf/suites.hpp"

namespace bcf {

namespace {

struct Globals {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string json_file, csv_file;
  unsigned seed = 1;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

i64 parse_int(const std::string& s) {
  std::size_t pos = 0;
  i64 v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw DomainError("not an integer: '" + s + "'");
  return v;
}

int parse_sign(const std::string& s) {
  if (s == "+" || s == "plus" || s == "1") return 1;
  if (s == "-" || s == "minus" || s == "-1") return -1;
  throw DomainError("sign must be + or -");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write " + path);
  f << text;
}

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

// Prints a summary, writes the requested files and maps the outcome to an exit code.
int finish(VerificationReport rep, const Globals& g, double seconds, std::ostream& out) {
  rep.wall_seconds = seconds;
  rep.workers = g.threads;
  if (!g.json_file.empty()) write_file(g.json_file, rep.to_json().dump(2) + "\n");
  if (!g.csv_file.empty()) write_file(g.csv_file, rep.to_csv());
  out << rep.failure_listing();
  for (const auto& n : rep.notes) out << "note: " << n << "\n";
  out << rep.name << ": " << rep.cells.size() - rep.failures() << "/" << rep.cells.size() << " cells pass\n";
  return rep.passed() ? 0 : 1;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

FiniteFunction parse_weight(const std::string& spec) {
  auto parts = split(spec, ':');
  if (parts.empty()) throw DomainError("empty weight");
  const std::string& kind = parts[0];
  if (kind == "one" && parts.size() == 1) {
    FiniteFunction f(1);
    f.set_integer(0, 1);
    return f;
  }
  if (kind == "disc0" && parts.size() == 2) {
    const i64 m = parse_int(parts[1]);
    if (m < 1 || m > 60) throw DomainError("disc0 modulus must lie in [1, 60]");
    FiniteFunction f(m);
    for (i64 i = 0; i < m * m * m * m; ++i)
      if (disc_mod(form_at(i, m), m) == 0) f.set_integer(i, 1);
    return f;
  }
  if ((kind == "phi" || kind == "phimax") && parts.size() == 2) return indicator_phi(parse_int(parts[1]), kind == "phimax");
  if (kind == "fchi" && parts.size() == 4) {
    const i64 N = parse_int(parts[1]), k = parse_int(parts[2]);
    auto chars = DirichletCharacter::all(N);
    if (k < 0 || k >= static_cast<i64>(chars.size())) throw DomainError("character index out of range");
    auto c = split(parts[3], ',');
    if (c.size() != 4) throw DomainError("fchi needs a form a,b,c,d");
    Form a{mod(parse_int(c[0]), N), mod(parse_int(c[1]), N), mod(parse_int(c[2]), N), mod(parse_int(c[3]), N)};
    return f_chi_a(chars[static_cast<std::size_t>(k)], a, N);
  }
  throw DomainError("unknown weight '" + spec + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Binary cubic forms: orbit census, Gauss sums, Shintani zeta coefficients, local densities"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&](CLI::App* a) {
    a->add_option("--threads", g.threads, "worker count")->check(CLI::PositiveNumber);
    a->add_option("--json", g.json_file, "write the report as JSON");
    a->add_option("--csv", g.csv_file, "write the report as CSV");
    a->add_option("--seed", g.seed, "seed for sampled checks");
  };
  add_globals(&app);

  // atlas census
  auto* atlas = app.add_subcommand("atlas", "orbit types of V over Z/p^e");
  atlas->require_subcommand(1);
  auto* census_cmd = atlas->add_subcommand("census", "count forms of each type against the closed forms");
  i64 prime = 0;
  std::string level = "p";
  census_cmd->add_option("--prime", prime)->required();
  census_cmd->add_option("--level", level)->check(CLI::IsMember({"p", "p2"}));
  add_globals(census_cmd);

  // gauss verify
  auto* gauss = app.add_subcommand("gauss", "orbital Gauss sums and Fourier transforms");
  gauss->require_subcommand(1);
  auto* gverify = gauss->add_subcommand("verify", "check the Gauss-sum and Fourier tables");
  std::string table, glevel;
  gverify->add_option("--prime", prime)->required();
  gverify->add_option("--level", glevel)->check(CLI::IsMember({"p", "p2"}));
  gverify->add_option("--table", table)->check(CLI::IsMember({"mori", "singular", "fourier"}));
  add_globals(gverify);

  // zeta coeffs / verify-on
  auto* zeta = app.add_subcommand("zeta", "coefficients of the Shintani zeta functions");
  zeta->require_subcommand(1);
  auto* coeffs = zeta->add_subcommand("coeffs", "write a coefficient table");
  i64 max_disc = 0, modulus = 0, residue = 0;
  std::string sign_s = "+", weight, out_file, partial;
  coeffs->add_option("--max-disc", max_disc)->required();
  coeffs->add_option("--sign", sign_s)->required();
  auto* mod_opt = coeffs->add_option("--mod", modulus, "restrict to n = residue mod N");
  coeffs->add_option("--residue", residue)->needs(mod_opt);
  coeffs->add_option("--weight", weight, "weight function (see parse_weight)");
  coeffs->add_option("--partial", partial, "partial zeta at the G_N-orbit of a,b,c,d (needs --mod)")->needs(mod_opt);
  coeffs->add_option("--out", out_file)->required();
  add_globals(coeffs);
  auto* von = zeta->add_subcommand("verify-on", "check the Ohno-Nakagawa relations");
  von->add_option("--max-disc", max_disc)->required();
  add_globals(von);

  // density verify / residue
  auto* density = app.add_subcommand("density", "local densities and residues");
  density->require_subcommand(1);
  auto* dverify = density->add_subcommand("verify", "check a residue-table suite");
  std::string suite = "all";
  std::vector<std::string> suites_allowed = residue_suites();
  suites_allowed.push_back("all");
  dverify->add_option("--suite", suite)->check(CLI::IsMember(suites_allowed));
  add_globals(dverify);
  auto* dres = density->add_subcommand("residue", "residues at s = 1 and s = 5/6 of xi(s, f)");
  i64 char_idx = 0;
  dres->add_option("--modulus", modulus)->required();
  dres->add_option("--weight", weight)->required();
  dres->add_option("--character", char_idx, "index into the characters mod N");
  add_globals(dres);

  // verify-all
  auto* vall = app.add_subcommand("verify-all", "every suite at desk scale");
  std::string primes_s = "5,7";
  vall->add_option("--primes", primes_s);
  max_disc = 2000;
  vall->add_option("--max-disc", max_disc);
  add_globals(vall);

  std::vector<const char*> argv{"bcf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  SuiteOptions so{g.threads, g.seed};
  try {
    if (*census_cmd) {
      const int e = level == "p2" ? 2 : 1;
      nlohmann::json j = nlohmann::json::object();
      bool ok = true;
      for (const auto& [s, entry] : census(prime, e)) {
        j[symbol_name(s)] = {{"count", entry.count}, {"closed_form", entry.closed_form}, {"match", entry.match}};
        ok &= entry.match;
      }
      out << j.dump(2) << "\n";
      if (!g.json_file.empty()) write_file(g.json_file, j.dump(2) + "\n");
      return ok ? 0 : 1;
    }
    if (*gverify) {
      VerificationReport rep;
      rep.name = "gauss p=" + std::to_string(prime);
      const int lv = glevel == "p" ? 1 : glevel == "p2" ? 2 : 0;
      std::vector<std::string> tables = table.empty() ? std::vector<std::string>{"mori", "singular", "fourier"}
                                                      : std::vector<std::string>{table};
      for (const auto& t : tables) {
        if (table.empty() && t != "fourier" && prime < 5) continue;
        auto r = gauss_report(prime, t, lv, so);
        if (tables.size() == 1) {
          rep = r;
        } else {
          rep.merge(r);
        }
      }
      return finish(rep, g, since(t0), out);
    }
    if (*coeffs) {
      const int sign = parse_sign(sign_s);
      if (max_disc > kMaxDiscBound) throw ResourceLimit("--max-disc exceeds " + std::to_string(kMaxDiscBound));
      EnumerateOptions eo;
      eo.threads = g.threads;
      eo.flags = false;
      auto classes = enumerate_classes(max_disc, sign, eo);
      nlohmann::json j;
      if (!partial.empty()) {
        auto c = split(partial, ',');
        if (c.size() != 4) throw DomainError("--partial needs a,b,c,d");
        Form a{mod(parse_int(c[0]), modulus), mod(parse_int(c[1]), modulus), mod(parse_int(c[2]), modulus),
               mod(parse_int(c[3]), modulus)};
        j = coefficients_to_json(partial_zeta_via_characters(classes, a, modulus));
      } else if (!weight.empty()) {
        j = coefficients_to_json(weighted_coeffs(classes, parse_weight(weight)));
      } else {
        auto t = class_number_table(classes, max_disc, sign);
        if (modulus > 0) {
          std::map<i64, Rational> kept;
          for (const auto& [n, v] : t.h)
            if (mod(n - residue, modulus) == 0) kept.emplace(n, v);
          t.h = kept;
        }
        j = table_to_json(t);
      }
      write_file(out_file, j.dump(1) + "\n");
      out << "wrote " << j.size() << " coefficients to " << out_file << "\n";
      return 0;
    }
    if (*von) return finish(on_report(max_disc, so), g, since(t0), out);
    if (*dverify) {
      VerificationReport rep;
      if (suite == "all") {
        rep.name = "density";
        for (const auto& s : residue_suites()) rep.merge(verify_residue_tables(s));
      } else {
        rep = verify_residue_tables(suite);
      }
      return finish(rep, g, since(t0), out);
    }
    if (*dres) {
      FiniteFunction f = parse_weight(weight);
      if (f.modulus() != modulus && !(f.modulus() == 1 && modulus == 1))
        throw DomainError("weight lives on V_" + std::to_string(f.modulus()) + ", not V_" + std::to_string(modulus));
      auto chars = DirichletCharacter::all(modulus);
      if (char_idx < 0 || char_idx >= static_cast<i64>(chars.size())) throw DomainError("character index out of range");
      auto r = residue_of_zeta(f, chars[static_cast<std::size_t>(char_idx)]);
      nlohmann::json j = {{"s1", {complex_json(r.s1.plus), complex_json(r.s1.minus)}},
                          {"s56", {complex_json(r.s56.plus), complex_json(r.s56.minus)}}};
      out << j.dump() << "\n";
      if (!g.json_file.empty()) write_file(g.json_file, j.dump(2) + "\n");
      return 0;
    }
    if (*vall) {
      VerificationReport rep;
      rep.name = "verify-all";
      std::vector<i64> primes;
      for (const auto& s : split(primes_s, ',')) primes.push_back(parse_int(s));
      for (i64 p : primes) {
        for (int e : {1, 2}) rep.merge(census_report(p, e));
        if (p >= 5) {
          rep.merge(gauss_report(p, "mori", 0, so));
          rep.merge(gauss_report(p, "singular", 0, so));
        }
        rep.merge(gauss_report(p, "fourier", p >= 5 ? 0 : 1, so));
      }
      rep.merge(on_report(max_disc, so));
      rep.merge(oracle_report(std::min<i64>(max_disc, 300)));
      rep.merge(identity_report(so));
      for (const auto& s : residue_suites()) rep.merge(verify_residue_tables(s));
      return finish(rep, g, since(t0), out);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedRing& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ContractViolation& e) {
    err << "contract violation: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 2;
}

}  // namespace bcf
