#pragma once

// Run configuration: key=value file, then command-line overrides.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "phfl/error.hpp"
#include "phfl/eval.hpp"

namespace phfl::cli {

inline constexpr const char* kConfigEnv = "PHFL_CONFIG";

struct RunConfig {
  Strategy strategy = Strategy::Demand;
  std::size_t full_threshold = 9;
  std::size_t iteration_cap = 50'000'000;
  bool json = false;

  EvalOptions eval_options() const {
    EvalOptions o;
    o.strategy = strategy;
    o.full_threshold = full_threshold;
    o.iteration_cap = iteration_cap;
    return o;
  }
};

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline Strategy parse_strategy(const std::string& v) {
  if (v == "full") return Strategy::Full;
  if (v == "demand") return Strategy::Demand;
  throw ValidationError("strategy must be full or demand, got '" + v + "'");
}

inline std::size_t parse_positive(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || n == 0) throw ValidationError(key + " must be a positive integer, got '" + v + "'");
  return static_cast<std::size_t>(n);
}

inline void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "strategy")
    c.strategy = parse_strategy(value);
  else if (key == "full_threshold")
    c.full_threshold = parse_positive(key, value);
  else if (key == "iteration_cap")
    c.iteration_cap = parse_positive(key, value);
  else if (key == "format") {
    if (value != "json" && value != "text") throw ValidationError("format must be json or text, got '" + value + "'");
    c.json = value == "json";
  } else
    throw ValidationError("unknown config key '" + key + "'");
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path);
  RunConfig c;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", no, 1);
    set_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

/// Explicit path, else $PHFL_CONFIG, else defaults.
inline RunConfig default_config(const std::string& path) {
  if (!path.empty()) return load_config(path);
  if (const char* env = std::getenv(kConfigEnv); env && *env) return load_config(env);
  return {};
}

}  // namespace phfl::cli
