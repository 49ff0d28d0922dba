#pragma once

#include <string>

#include "config.hpp"

namespace bdi {

/// Exit codes beyond 0 (success) and 1/2 (usage and config errors).
inline constexpr int kPartialResult = 3;
inline constexpr int kOracleFailure = 4;

struct OutputOptions {
  std::string dir;  ///< empty: tables go to stdout
  bool json = false;
};

int run_subcommand(const ExperimentConfig& cfg, const OutputOptions& out);

}  // namespace bdi
