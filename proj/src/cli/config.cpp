#include "genscatter/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "genscatter/errors.hpp"

namespace genscatter::cli {

namespace {

std::string trim(const std::string &s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string &s, const std::string &what) {
  const std::string t = trim(s);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception &) {
    throw ConfigError(what + ": '" + s + "' is not a number");
  }
  if (pos != t.size() || !std::isfinite(v)) throw ConfigError(what + ": '" + s + "' is not a number");
  return v;
}

} // namespace

std::vector<double> GridSpec::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : double(i) / (count - 1);
    v[i] = log ? min * std::pow(max / min, f) : min + (max - min) * f;
  }
  if (count > 1) v.back() = max;
  return v;
}

GridSpec parse_grid(const std::string &text) {
  std::vector<std::string> f;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) f.push_back(trim(p));
  if (f.size() != 3 && f.size() != 4)
    throw ConfigError("grid '" + text + "': expected min:max:count[:linear|log]");
  GridSpec g;
  g.min = parse_real(f[0], "grid min");
  g.max = parse_real(f[1], "grid max");
  const double c = parse_real(f[2], "grid count");
  if (c != std::floor(c) || c < 1 || c > 1e6)
    throw ConfigError("grid '" + text + "': count must be an integer in [1, 1e6]");
  g.count = static_cast<int>(c);
  if (f.size() == 4) {
    if (f[3] == "log") g.log = true;
    else if (f[3] != "linear") throw ConfigError("grid '" + text + "': spacing must be linear or log");
  }
  if (g.max < g.min) throw ConfigError("grid '" + text + "': max < min");
  if (g.log && !(g.min > 0.0)) throw ConfigError("grid '" + text + "': log spacing needs min > 0");
  return g;
}

std::vector<double> parse_list(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_real(p, "list entry"));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = path + ":" + std::to_string(n);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    if (out.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

std::uint64_t fnv1a(const std::string &text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

} // namespace genscatter::cli
