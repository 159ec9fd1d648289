#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "equations.hpp"
#include "errors.hpp"

namespace fisub {

// INI text: one [section] per family or equation id, key = value lines,
// values plain decimal numbers. Keys outside any section are rejected.
struct Config {
  std::map<std::string, Params> sections;

  bool has(const std::string& id) const { return sections.count(id) != 0; }
  Params section(const std::string& id) const {
    auto it = sections.find(id);
    return it == sections.end() ? Params{} : it->second;
  }
};

inline double parse_decimal(const std::string& text, const std::string& where) {
  std::size_t b = text.find_first_not_of(" \t"), e = text.find_last_not_of(" \t");
  const std::string s = b == std::string::npos ? "" : text.substr(b, e - b + 1);
  double v = 0.0;
  const char* first = s.data() + (!s.empty() && s[0] == '+' ? 1 : 0);
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v, std::chars_format::general);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(where + ": '" + text + "' is not a decimal number");
  return v;
}

inline Config parse_config(std::istream& in, const std::string& name = "<config>") {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(name + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  Config cfg;
  for (const auto& [sec, body] : tree) {
    if (body.empty()) throw ConfigError(name + ": key '" + sec + "' outside any section");
    Params& p = cfg.sections[sec];
    for (const auto& [key, val] : body) p[key] = parse_decimal(val.data(), name + " [" + sec + "] " + key);
  }
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace fisub
