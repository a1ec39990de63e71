#pragma once

#include "fdelab/coefficient.hpp"
#include "fdelab/mesh.hpp"

namespace fdelab::solver {

/// (x^(alpha))' + q(t) x = 0 on the mesh, with x(0) = x0 and
/// lim_{t->0} x^(alpha)(t) = y0.
struct FdeProblem {
  double alpha = 0.5;
  double x0 = 1.0;
  double y0 = 0.0;
  Coefficient q = Coefficient::constant(0.0);
  MeshPtr mesh;
};

/// Trajectory of a solve. For the fractional equation y = x^(alpha); for the
/// curvature equation y = Dx = x' / sqrt(1 + x'^2). In both cases
/// yprime = -q x.
struct Solution {
  MeshPtr mesh;
  GridFunction x;
  GridFunction y;
  GridFunction yprime;
  GridFunction xprime;
};

/// Product-integration solve of the coupled Volterra system
///   y(t) = y0 - int_0^t q x ds,
///   x(t) = x0 + (1/Gamma(alpha)) int_0^t (t - s)^(alpha-1) y(s) ds.
Solution solve_fde(const FdeProblem& problem);

/// r(t) = d/dt [x^(alpha)](t) + q(t) x(t), with the Caputo derivative by the L1
/// rule and the time derivative by finite differences. Nodes where q is not
/// defined are flagged missing.
GridFunction residual_fde(const GridFunction& x, const Coefficient& q, double alpha);

/// (Dx)' + q(t) x = 0 with Dx = x' / sqrt(1 + x'^2), written as
///   u' = -q x,  x' = u / sqrt(1 - u^2),
/// integrated by classical RK4 on the mesh. Requires |u0| < 1.
struct CurvatureProblem {
  double x0 = 0.0;
  double u0 = 0.0;
  Coefficient q = Coefficient::constant(0.0);
  MeshPtr mesh;
};

Solution solve_curvature(const CurvatureProblem& problem);

/// Derivative of samples on a nonuniform mesh: three-point Lagrange formula
/// in the interior, one-sided three-point formulas at the ends.
GridFunction differentiate(const GridFunction& f);

}  // namespace fdelab::solver
