#pragma once

#include <span>
#include <vector>

#include "fdelab/mesh.hpp"

namespace fdelab::fracops {

/// Row weights of the product-trapezoidal rule for
///   integral_0^{t_n} (t_n - s)^(a - 1) g(s) ds  ~  sum_j w[n][j] g_j,
/// with g piecewise linear and the kernel integrated exactly. On uniform
/// meshes the weights depend only on the lag n - j and are tabulated once.
class ProductTrapezoidWeights {
 public:
  ProductTrapezoidWeights(MeshPtr mesh, double alpha);

  /// Fills out[0..n] with the weights for node n (out.size() > n).
  void row(std::size_t n, std::span<double> out) const;
  /// Weight of g_n in row n (the implicit part).
  double diagonal(std::size_t n) const;

  const Mesh& mesh() const { return *mesh_; }
  double alpha() const { return alpha_; }

 private:
  // Integrals over [t_j, t_{j+1}] against the left and right hat functions,
  // with a = t_n - t_{j+1} and b = t_n - t_j.
  void interval(double a, double b, double& left, double& right) const;

  MeshPtr mesh_;
  double alpha_;
  std::vector<double> lag_left_;   // uniform only, unit step
  std::vector<double> lag_right_;  // uniform only, unit step
  double h_pow_ = 1.0;             // h^alpha on uniform meshes
};

/// L1 weights for the Caputo derivative: at node n,
///   D f(t_n) = sum_{j=1}^n c[n][j] (f_j - f_{j-1}) / Gamma(2 - a),
/// c[n][j] = ((t_n - t_{j-1})^(1-a) - (t_n - t_j)^(1-a)) / (t_j - t_{j-1}).
class L1Weights {
 public:
  L1Weights(MeshPtr mesh, double alpha);

  /// Fills out[1..n] (out[0] untouched).
  void row(std::size_t n, std::span<double> out) const;

  const Mesh& mesh() const { return *mesh_; }
  double alpha() const { return alpha_; }

 private:
  MeshPtr mesh_;
  double alpha_;
  std::vector<double> lag_;  // uniform only: ((m+1)^(1-a) - m^(1-a)), m = n - j
  double h_pow_ = 1.0;       // h^(-a) on uniform meshes
};

/// Caputo derivative of order alpha in (0, 1) by the L1 product rule.
/// The value at node 0 is reported as 0.
GridFunction caputo_derivative(const GridFunction& f, double alpha);
GridFunction caputo_derivative(const GridFunction& f, const L1Weights& weights);

/// h(t_n) = h0 + (1/Gamma(alpha)) integral_0^{t_n} (t_n - s)^(alpha-1) g(s) ds,
/// product-trapezoidal.
GridFunction fractional_integral(const GridFunction& g, double alpha, double h0);
GridFunction fractional_integral(const GridFunction& g, const ProductTrapezoidWeights& weights, double h0);

/// (a + h)^p - a^p for a >= 0, h > 0, without cancellation when h << a.
double power_increment(double a, double h, double p);

}  // namespace fdelab::fracops
