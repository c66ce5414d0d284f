#include "bcf/report.hpp"

#include <cstdio>
#include <sstream>

namespace bcf {

void VerificationReport::add(std::string cell, std::string expected, std::string got, bool ok) {
  cells.push_back({std::move(cell), std::move(expected), std::move(got), ok});
}

void VerificationReport::merge(const VerificationReport& other) {
  for (const auto& c : other.cells) {
    ReportCell d = c;
    if (!other.name.empty()) d.cell = other.name + "/" + c.cell;
    cells.push_back(std::move(d));
  }
  for (const auto& n : other.notes) notes.push_back(n);
}

bool VerificationReport::passed() const { return !cells.empty() && failures() == 0; }

std::size_t VerificationReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.exact_match ? 0 : 1;
  return n;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["passed"] = passed();
  j["failures"] = failures();
  auto& arr = j["cells"] = nlohmann::json::array();
  for (const auto& c : cells)
    arr.push_back({{"cell", c.cell}, {"expected", c.expected}, {"got", c.got}, {"exact_match", c.exact_match}});
  j["notes"] = notes;
  j["wall_seconds"] = wall_seconds;
  j["workers"] = workers;
  return j;
}

VerificationReport VerificationReport::from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.name = j.at("name").get<std::string>();
  for (const auto& c : j.at("cells"))
    r.add(c.at("cell").get<std::string>(), c.at("expected").get<std::string>(), c.at("got").get<std::string>(),
          c.at("exact_match").get<bool>());
  if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
  r.wall_seconds = j.value("wall_seconds", 0.0);
  r.workers = j.value("workers", 1);
  return r;
}

namespace {
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char ch : s) {
    if (ch == '"') r += '"';
    r += ch;
  }
  return r + "\"";
}
}  // namespace

std::string VerificationReport::to_csv() const {
  std::ostringstream os;
  os << "cell,expected,got,exact_match\n";
  for (const auto& c : cells)
    os << csv_field(c.cell) << ',' << csv_field(c.expected) << ',' << csv_field(c.got) << ','
       << (c.exact_match ? "true" : "false") << '\n';
  return os.str();
}

std::string VerificationReport::failure_listing() const {
  std::ostringstream os;
  for (const auto& c : cells)
    if (!c.exact_match) os << name << ": " << c.cell << " got " << c.got << " expected " << c.expected << '\n';
  return os.str();
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace bcf
