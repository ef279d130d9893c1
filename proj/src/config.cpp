#include "doflab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <string>

#include "doflab/errors.hpp"

namespace doflab {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

int parse_int(const std::string& value, const std::string& where) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw SchemaError(where + ": expected an integer");
  return out;
}

double parse_double(const std::string& value, const std::string& where) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw SchemaError(where + ": expected a number");
  return out;
}

}  // namespace

ToolConfig load_config(const std::string& path, ToolConfig config) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open config " + path);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = path + ":" + std::to_string(number);
    line = trim(line);
    if (line.empty() || line.front() == '#' || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SchemaError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string::npos) value = trim(value.substr(0, hash));
    value = unquote(value);
    if (key == "oracle_limit") {
      config.oracle_limit = parse_int(value, where);
    } else if (key == "average_limit") {
      config.average_limit = parse_int(value, where);
    } else if (key == "residual_tolerance") {
      config.residual_tolerance = parse_double(value, where);
    } else if (key == "slope_tolerance") {
      config.slope_tolerance = parse_double(value, where);
    } else if (key == "sum_slope_tolerance") {
      config.sum_slope_tolerance = parse_double(value, where);
    } else {
      throw SchemaError(where + ": unknown key '" + key + "'");
    }
  }
  return config;
}

ToolConfig apply_environment(ToolConfig config) {
  if (const char* env = std::getenv("DOFLAB_ORACLE_LIMIT")) {
    const int limit = parse_int(trim(env), "DOFLAB_ORACLE_LIMIT");
    config.oracle_limit = limit;
    config.average_limit = limit;
  }
  return config;
}

}  // namespace doflab
