#include "lagerstrom/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace lagerstrom::report {
namespace {

using nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json metadata_json(const verify::Metadata& m) {
  ordered_json j;
  j["params"] = m.params;
  j["config"] = m.config;
  if (m.timestamp) j["timestamp"] = *m.timestamp;
  return j;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string relation_name(verify::Relation r) {
  switch (r) {
    case verify::Relation::kWithin:
      return "within";
    case verify::Relation::kAtMost:
      return "at_most";
    case verify::Relation::kAtLeast:
      return "at_least";
    case verify::Relation::kStrictlyAbove:
      return "strictly_above";
  }
  return "unknown";
}

std::string to_csv(const Table& t) {
  std::ostringstream out;
  for (const auto& [k, v] : t.metadata) out << "# " << k << " = " << v << "\n";
  for (const auto& [k, v] : t.summary) out << "# " << k << " = " << format_number(v) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << "\n";
  }
  return out.str();
}

std::string to_json(const Table& t) {
  ordered_json j;
  j["metadata"] = t.metadata;
  ordered_json summary = ordered_json::object();
  for (const auto& [k, v] : t.summary) summary[k] = number(v);
  j["summary"] = summary;
  j["columns"] = t.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json r = ordered_json::array();
    for (double v : row) r.push_back(number(v));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string to_csv(const verify::Report& r) {
  std::ostringstream out;
  out << "name,measured,reference,tolerance,relation,passed\n";
  for (const auto& c : r.checks) {
    out << csv_field(c.name) << "," << format_number(c.measured) << "," << format_number(c.reference) << ","
        << format_number(c.tolerance) << "," << relation_name(c.relation) << "," << (c.passed ? "true" : "false")
        << "\n";
  }
  return out.str();
}

std::string to_json(const verify::Report& r) {
  ordered_json j;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["measured"] = number(c.measured);
    e["reference"] = number(c.reference);
    e["tolerance"] = number(c.tolerance);
    e["relation"] = relation_name(c.relation);
    e["passed"] = c.passed;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["metadata"] = metadata_json(r.metadata);
  j["all_passed"] = r.all_passed();
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace lagerstrom::report
