#pragma once

// Tabular results with a metadata header, written as CSV or JSON and read back.

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace genscatter::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;  // ordered
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_meta(const std::string &key, const std::string &value);
  void add_meta(const std::string &key, double value);
  const std::string *find_meta(const std::string &key) const;
  std::size_t column(const std::string &name) const;
  double number(std::size_t row, const std::string &col) const;
};

// 17 significant digits
std::string format_double(double v);

// '# key: value' lines, a header row, then RFC-4180 style rows
void write_csv(std::ostream &out, const Table &t);
// {"meta": {...}, "rows": [{...}, ...]}
void write_json(std::ostream &out, const Table &t);
Table read_csv(std::istream &in);
Table read_json(std::istream &in);

} // namespace genscatter::cli
