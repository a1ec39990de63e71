#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fdelab/coefficient.hpp"
#include "fdelab/mesh.hpp"
#include "fdelab/solver.hpp"

namespace fdelab::diagnostics {

/// S = y (x' - y) node-wise, where y is x^(alpha) (or Dx for the curvature
/// equation). Missing x' propagates.
GridFunction sign_quantity(const solver::Solution& sol);

struct RiccatiResult {
  GridFunction w;         // y / x, missing where |x| <= threshold
  GridFunction residual;  // -S / x^2
  GridFunction direct;    // w' + w^2 + q with w' by differences
  double threshold = 0.0;
  double max_consistency_gap = 0.0;  // max |residual - direct|
  std::size_t masked = 0;
  std::vector<std::string> notes;
};

/// Default masking threshold, relative to max |x|.
inline constexpr double kRelativeMask = 1e-8;

/// Riccati form of the equation for w = y / x:
///   w' + w^2 + q = (-y x' + y^2) / x^2 = -S / x^2.
/// Throws EmptyResultError when every node is masked.
RiccatiResult riccati_residual(const solver::Solution& sol, const Coefficient& q,
                               double relative_threshold = kRelativeMask);

/// Times where f changes strict sign between consecutive present nodes.
/// With refine, the root of the linear interpolant; otherwise the midpoint.
std::vector<double> detect_sign_changes(const GridFunction& f, bool refine = true);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Final estimate of the Riccati argument:
///   t^-eps int_T^t (t - s)^eps q(s) ds <= |w(T)| + eps^2 / (4 (eps - 1) t).
/// The caller is responsible for the residual being <= 0 on [T, t].
BoundCheck kamenev_bound_check(double w_T, const Coefficient& q, double epsilon, double T, double t);

struct LimitEstimate {
  double mean = 0.0;
  double slope = 0.0;
  std::size_t nodes = 0;
};

/// Mean and least-squares trend of x^(alpha) over the trailing fraction of nodes.
LimitEstimate limit_estimate_xalpha(const solver::Solution& sol, double window_fraction);

/// Nodes where S < 0 start a new run; the returned times are the refined
/// entries into negative values.
std::vector<double> negative_entries(const GridFunction& S);

}  // namespace fdelab::diagnostics
