#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "collapse/solver_config.hpp"

namespace collapse::cli {

/// `collapse run` configuration file (JSON object).
struct RunConfig {
  double theta_i = 0.0;
  double phi_i = 0.0;
  double rho = 1.0;
  double tau = 0.0;
  std::string pfn;
  int memory_depth = 0;
  int max_steps = 10;
  int grid_n = 1024;
  SolverMethod method = SolverMethod::both;
  std::uint64_t seed = 0;
  std::string out;
};

/// Throws std::invalid_argument naming the line/column (syntax) or the field
/// (missing, unknown, wrong type, out of range).
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

}  // namespace collapse::cli
