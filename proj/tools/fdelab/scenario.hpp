#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdelab/averaging.hpp"
#include "fdelab/coefficient.hpp"
#include "fdelab/mesh.hpp"

namespace fdelab::cli {

/// Config problem, addressed by file and line.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Equation { fractional, curvature };
enum class Mode { solve, residual };

/// Closed-form solutions the tool can compare against.
enum class ReferenceKind { none, mittag_leffler, power, free };

struct MeshSpec {
  double start = 0.0;
  double end = 10.0;
  std::size_t intervals = 1000;
  bool graded = false;
  double r = 2.0;
  MeshPtr build() const;
  MeshPtr build(std::size_t n) const;
};

struct BoundCheckSpec {
  double epsilon = 3.0;
  double T = 1.0;
  std::vector<double> t;
};

struct DiagnosticsSpec {
  double mask = 1e-8;
  double limit_window = 0.25;
  std::optional<double> spacing_after;  // compare crossing gaps beyond this time
  std::optional<BoundCheckSpec> bound_check;
};

struct ResidualSpec {
  double from = 0.0;
  double to = 0.0;
  double tol = 0.0;
};

struct Scenario {
  std::string name;
  std::string source_file;
  Equation equation = Equation::fractional;
  Mode mode = Mode::solve;
  double alpha = 0.5;
  double x0 = 1.0;
  double y0 = 0.0;  // u0 for the curvature equation
  Coefficient q = Coefficient::constant(0.0);
  std::optional<double> beta;  // exponent of the sampled t^beta in residual mode
  MeshSpec mesh;
  std::optional<averaging::KamenevParams> kamenev;
  double tail_horizon = 1e3;
  DiagnosticsSpec diagnostics;
  std::optional<ResidualSpec> residual;
  std::vector<std::size_t> convergence;
  std::string output_dir;

  ReferenceKind reference() const;
};

/// Parses and validates a YAML scenario file. Throws ValidationError.
Scenario load_scenario(const std::string& path);

/// Same, from text; `origin` names the source in messages.
Scenario parse_scenario(const std::string& text, const std::string& origin);

}  // namespace fdelab::cli
