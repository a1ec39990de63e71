#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace fdelab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

enum class Command { solve, residual, kamenev, conditions, diagnose, converge, zeros };

std::optional<Command> parse_command(const std::string& name);
std::string to_string(Command c);

struct RunOptions {
  std::optional<std::size_t> n;    // overrides mesh.N
  std::optional<std::string> out;  // overrides output_dir
  bool quiet = false;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string out_dir;
  std::string summary;  // one line for the console
  std::vector<std::string> artifacts;
};

/// Runs one command on a parsed scenario, writing artifacts under the output
/// directory. Maps failures to exit codes instead of throwing.
RunResult run(Command command, const Scenario& scenario, const RunOptions& options);

/// load_scenario + run. Config errors give exit 2.
RunResult run_file(Command command, const std::string& config, const RunOptions& options);

}  // namespace fdelab::cli
