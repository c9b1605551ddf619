#pragma once

#include <map>
#include <string>
#include <vector>

#include "lagerstrom/verify.hpp"

namespace lagerstrom::report {

/// Numeric table with named columns and a key/value summary block.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Scalars such as c_star or Phi, written ahead of the rows.
  std::vector<std::pair<std::string, double>> summary;
  std::map<std::string, std::string> metadata;
};

/// Shortest decimal text that round-trips (at most 17 significant digits).
std::string format_number(double v);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

std::string to_csv(const verify::Report& r);
std::string to_json(const verify::Report& r);

std::string relation_name(verify::Relation r);

/// Writes `content` to `path`; throws std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace lagerstrom::report
