#pragma once

#include "copolab/common.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace copolab {

struct RunConfig {
  std::string command;  // analyze | copolarity | reduce | slice | sympair |
                        // resolution | gauge | verify
  std::string input_path;
  std::string output_path;
  std::uint64_t seed = 0;
  int samples = 200;
  int budget = 64;  // restarts for orbit-distance estimates
  int terms = 4;    // Gram family size for the gauge command
  std::optional<double> rel_rank_tol;
  std::optional<double> abs_zero_tol;
  std::optional<double> containment_tol;
};

/// Execute the named pipeline and write a single JSON report to
/// output_path (atomically). Returns 0 when every check passes, 2 when a
/// check fails, 3 on input errors.
int run(const RunConfig& config);

}  // namespace copolab
