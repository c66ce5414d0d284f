#pragma once

// Verification reports: one cell per checked table entry or identity instance.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bcf {

struct ReportCell {
  std::string cell;
  std::string expected;
  std::string got;
  bool exact_match = false;
};

struct VerificationReport {
  std::string name;
  std::vector<ReportCell> cells;
  std::vector<std::string> notes;
  double wall_seconds = 0;
  int workers = 1;

  void add(std::string cell, std::string expected, std::string got, bool ok);
  void note(std::string s) { notes.push_back(std::move(s)); }
  void merge(const VerificationReport& other);
  bool passed() const;
  std::size_t failures() const;

  nlohmann::json to_json() const;
  static VerificationReport from_json(const nlohmann::json& j);
  std::string to_csv() const;
  // One line per failing cell, empty when all pass.
  std::string failure_listing() const;
};

// Numbers rendered with 12 significant digits.
std::string format_double(double x);

}  // namespace bcf
