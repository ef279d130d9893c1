#pragma once

#include <string>

namespace doflab {

// Settings readable from a key = value file. Lines starting with '#' are
// comments; string values may be quoted.
struct ToolConfig {
  int oracle_limit = 10;
  int average_limit = 8;
  double residual_tolerance = 1e-9;
  double slope_tolerance = 0.05;
  double sum_slope_tolerance = 0.05;
};

// Unknown keys and malformed values throw SchemaError.
ToolConfig load_config(const std::string& path, ToolConfig base = {});

// Applies DOFLAB_ORACLE_LIMIT when set; it overrides both K limits.
ToolConfig apply_environment(ToolConfig config);

}  // namespace doflab
