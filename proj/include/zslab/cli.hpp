#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zslab/search.hpp"

namespace zslab::cli {

enum class Output { json, csv, text };

struct RunConfig {
  unsigned threads = 1;
  std::uint64_t node_cap = 0;
  std::chrono::milliseconds time_cap{0};
  Output output = Output::json;
  Mode mode = Mode::audit;
  std::uint64_t seed = 1;
  /// Drop wall-clock fields so output is byte-identical across runs.
  bool stable = false;
};

enum ExitCode : int { ok = 0, property_fails = 1, usage_error = 2, cap_exceeded = 3 };

/// "250ms", "30s", "5m"; a bare number is seconds.
std::chrono::milliseconds parse_duration(const std::string& text);

/// Runs one command line (args excludes the program name). Results go to
/// `out` through a single write; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zslab::cli
