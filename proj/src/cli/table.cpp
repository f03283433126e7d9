#include "genscatter/cli/table.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "genscatter/errors.hpp"

namespace genscatter::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string csv_escape(const std::string &s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell &c) {
  if (const auto *d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto *i = std::get_if<long long>(&c)) return std::to_string(*i);
  return csv_escape(std::get<std::string>(c));
}

// RFC-4180 record splitting; a record may span lines inside quotes
bool read_record(std::istream &in, std::vector<std::string> &fields, std::string &first_line) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  first_line = line;
  std::string cur;
  bool quoted = false;
  for (;;) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cur += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    if (!quoted) break;
    cur += '\n';
    if (!std::getline(in, line)) throw ConfigError("csv: unterminated quoted field");
  }
  fields.push_back(cur);
  return true;
}

Cell parse_cell(const std::string &s) {
  if (s.empty()) return s;
  const char *b = s.c_str();
  char *end = nullptr;
  if (s.find_first_of(".eEnNiI") == std::string::npos) {
    errno = 0;
    const long long v = std::strtoll(b, &end, 10);
    if (*end == '\0' && errno == 0) return v;
  }
  const double d = std::strtod(b, &end);
  if (*end == '\0') return d;
  return s;
}

Cell from_json_value(const ojson &v) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return v.get<std::string>();
  throw ConfigError("json table: unsupported cell type");
}

} // namespace

void Table::add_meta(const std::string &key, const std::string &value) { meta.emplace_back(key, value); }
void Table::add_meta(const std::string &key, double value) { meta.emplace_back(key, format_double(value)); }

const std::string *Table::find_meta(const std::string &key) const {
  for (const auto &[k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

std::size_t Table::column(const std::string &name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ConfigError("table: no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string &col) const {
  const Cell &c = rows.at(row).at(column(col));
  if (const auto *d = std::get_if<double>(&c)) return *d;
  if (const auto *i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  throw ConfigError("table: column '" + col + "' is not numeric");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream &out, const Table &t) {
  for (const auto &[k, v] : t.meta) out << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_escape(t.columns[i]);
  out << "\n";
  for (const auto &r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell_text(r[i]);
    out << "\n";
  }
}

void write_json(std::ostream &out, const Table &t) {
  ojson doc;
  doc["meta"] = ojson::object();
  for (const auto &[k, v] : t.meta) doc["meta"][k] = v;
  doc["columns"] = t.columns;
  doc["rows"] = ojson::array();
  for (const auto &r : t.rows) {
    ojson row = ojson::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      const Cell &c = r[i];
      if (const auto *d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) row[t.columns[i]] = *d;
        else row[t.columns[i]] = nullptr;
      } else if (const auto *n = std::get_if<long long>(&c)) {
        row[t.columns[i]] = *n;
      } else {
        row[t.columns[i]] = std::get<std::string>(c);
      }
    }
    doc["rows"].push_back(row);
  }
  out << doc.dump(1) << "\n";
}

Table read_csv(std::istream &in) {
  Table t;
  std::vector<std::string> f;
  std::string line;
  bool header = false;
  while (read_record(in, f, line)) {
    if (!header) {
      if (line.rfind("#", 0) == 0) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        auto trim = [](std::string s) {
          const auto a = s.find_first_not_of(' ');
          return a == std::string::npos ? std::string() : s.substr(a);
        };
        t.meta.emplace_back(trim(line.substr(1, colon - 1)), trim(line.substr(colon + 1)));
        continue;
      }
      if (line.empty()) continue;
      t.columns = f;
      header = true;
      continue;
    }
    if (line.empty()) continue;
    if (f.size() != t.columns.size())
      throw ConfigError("csv: row has " + std::to_string(f.size()) + " fields, expected " +
                        std::to_string(t.columns.size()));
    std::vector<Cell> row;
    for (const auto &s : f) row.push_back(parse_cell(s));
    t.rows.push_back(std::move(row));
  }
  if (!header) throw ConfigError("csv: missing header row");
  return t;
}

Table read_json(std::istream &in) {
  ojson doc;
  try {
    doc = ojson::parse(in);
  } catch (const ojson::exception &e) {
    throw ConfigError(std::string("json table: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("meta") || !doc.contains("rows"))
    throw ConfigError("json table: expected an object with meta and rows");
  Table t;
  for (const auto &[k, v] : doc["meta"].items())
    t.meta.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
  if (doc.contains("columns")) {
    for (const auto &c : doc["columns"]) t.columns.push_back(c.get<std::string>());
  } else if (!doc["rows"].empty()) {
    for (const auto &[k, v] : doc["rows"][0].items()) t.columns.push_back(k);
  }
  for (const auto &r : doc["rows"]) {
    std::vector<Cell> row;
    for (const auto &c : t.columns) {
      if (!r.contains(c)) throw ConfigError("json table: row missing '" + c + "'");
      row.push_back(from_json_value(r[c]));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

} // namespace genscatter::cli
