#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "commands.hpp"

namespace cli = fdelab::cli;

int main(int argc, char** argv) {
  CLI::App app{"fdelab: fractional oscillation laboratory"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string out;
  std::size_t n = 0;
  bool quiet = false;

  const std::vector<std::pair<cli::Command, std::string>> commands = {
      {cli::Command::solve, "Solve the equation, write solution.csv"},
      {cli::Command::residual, "Residual of the equation on the mesh"},
      {cli::Command::kamenev, "Kamenev averages and verdict"},
      {cli::Command::conditions, "Integrability conditions on q"},
      {cli::Command::diagnose, "Solution, Riccati quantities, sign quantity, crossings, bounds"},
      {cli::Command::converge, "Refinement study against the closed-form reference"},
      {cli::Command::zeros, "Sign changes of x"},
  };
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(cli::to_string(cmd), help);
    sub->add_option("--config", configs, "Scenario file (YAML); repeat to run several in parallel")->required();
    sub->add_option("--out", out, "Output directory (one subdirectory per scenario when several are given)");
    sub->add_option("--n", n, "Override mesh.N")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", quiet, "Only report errors");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitValidation;
  }

  const cli::Command command = *cli::parse_command(app.get_subcommands().front()->get_name());
  std::vector<cli::RunResult> results(configs.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    workers.emplace_back([&, i] {
      cli::RunOptions opts;
      opts.quiet = quiet;
      if (n > 0) opts.n = n;
      try {
        const cli::Scenario sc = cli::load_scenario(configs[i]);
        if (!out.empty()) {
          opts.out = configs.size() > 1 ? (std::filesystem::path(out) / sc.name).string() : out;
        }
        results[i] = cli::run(command, sc, opts);
      } catch (const cli::ValidationError& e) {
        results[i].exit_code = cli::kExitValidation;
        results[i].summary = std::string("validation_error: ") + e.what();
      }
    });
  }
  for (auto& w : workers) w.join();

  int code = cli::kExitOk;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.exit_code != cli::kExitOk) {
      std::cerr << configs[i] << ": " << r.summary << '\n';
    } else if (!quiet) {
      std::cout << configs[i] << ": " << r.summary << " -> " << r.out_dir << '\n';
    }
    code = std::max(code, r.exit_code);
  }
  return code;
}
