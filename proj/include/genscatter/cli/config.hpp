#pragma once

// Run configuration: grid specs, key=value config files, canonical hashing.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace genscatter::cli {

struct GridSpec {
  double min = 0.0, max = 0.0;
  int count = 1;
  bool log = false;
  std::vector<double> values() const;
};

// "min:max:count[:linear|log]", count <= 1e6
GridSpec parse_grid(const std::string &text);
// comma separated reals
std::vector<double> parse_list(const std::string &text);

// key=value lines, '#' comments; ConfigError names the offending line
std::map<std::string, std::string> read_config_file(const std::string &path);

std::uint64_t fnv1a(const std::string &text);
std::string hex64(std::uint64_t v);

} // namespace genscatter::cli
