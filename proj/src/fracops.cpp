#include "fdelab/fracops.hpp"

#include <cmath>
#include <string>

#include "fdelab/error.hpp"
#include "fdelab/specialfn.hpp"

namespace fdelab::fracops {

namespace {

void check_alpha(double alpha, const char* op) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(op) + ": alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

void check_input(const GridFunction& f, const char* op) {
  if (!f.mesh().starts_at_zero()) throw DomainError(std::string(op) + ": mesh must start at t = 0");
  if (f.missing_count() != 0) throw DomainError(std::string(op) + ": input has missing values");
}

}  // namespace

double power_increment(double a, double h, double p) {
  if (a == 0.0) return std::pow(h, p);
  return std::pow(a, p) * std::expm1(p * std::log1p(h / a));
}

ProductTrapezoidWeights::ProductTrapezoidWeights(MeshPtr mesh, double alpha)
    : mesh_(std::move(mesh)), alpha_(alpha) {
  check_alpha(alpha, "ProductTrapezoidWeights");
  if (!mesh_->starts_at_zero()) throw DomainError("ProductTrapezoidWeights: mesh must start at t = 0");
  if (mesh_->is_uniform()) {
    const std::size_t n = mesh_->size();
    lag_left_.resize(n);
    lag_right_.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
      interval(static_cast<double>(m), static_cast<double>(m + 1), lag_left_[m], lag_right_[m]);
    }
    h_pow_ = std::pow(mesh_->step(0), alpha_);
  }
}

void ProductTrapezoidWeights::interval(double a, double b, double& left, double& right) const {
  const double h = b - a;
  const double whole = power_increment(a, h, alpha_) / alpha_;
  const double upper = power_increment(a, h, alpha_ + 1.0) / (alpha_ + 1.0);
  // integral of u^(a-1) (b - u) du over [a, b], divided by h
  right = (b * whole - upper) / h;
  left = whole - right;
}

void ProductTrapezoidWeights::row(std::size_t n, std::span<double> out) const {
  for (std::size_t j = 0; j <= n; ++j) out[j] = 0.0;
  if (n == 0) return;
  if (!lag_left_.empty()) {
    for (std::size_t j = 0; j <= n; ++j) {
      double w = 0.0;
      if (j < n) w += lag_left_[n - j - 1];
      if (j > 0) w += lag_right_[n - j];
      out[j] = h_pow_ * w;
    }
    return;
  }
  const Mesh& m = *mesh_;
  const double tn = m[n];
  for (std::size_t j = 0; j < n; ++j) {
    double left = 0.0;
    double right = 0.0;
    interval(tn - m[j + 1], tn - m[j], left, right);
    out[j] += left;
    out[j + 1] += right;
  }
}

double ProductTrapezoidWeights::diagonal(std::size_t n) const {
  if (n == 0) return 0.0;
  const double h = mesh_->step(n - 1);
  return std::pow(h, alpha_) / (alpha_ * (alpha_ + 1.0));
}

L1Weights::L1Weights(MeshPtr mesh, double alpha) : mesh_(std::move(mesh)), alpha_(alpha) {
  check_alpha(alpha, "L1Weights");
  if (mesh_->is_uniform()) {
    const std::size_t n = mesh_->size();
    lag_.resize(n);
    for (std::size_t m = 0; m < n; ++m) lag_[m] = power_increment(static_cast<double>(m), 1.0, 1.0 - alpha_);
    h_pow_ = std::pow(mesh_->step(0), -alpha_);
  }
}

void L1Weights::row(std::size_t n, std::span<double> out) const {
  if (!lag_.empty()) {
    for (std::size_t j = 1; j <= n; ++j) out[j] = h_pow_ * lag_[n - j];
    return;
  }
  const Mesh& m = *mesh_;
  const double tn = m[n];
  for (std::size_t j = 1; j <= n; ++j) {
    const double h = m[j] - m[j - 1];
    out[j] = power_increment(tn - m[j], h, 1.0 - alpha_) / h;
  }
}

GridFunction caputo_derivative(const GridFunction& f, double alpha) {
  check_alpha(alpha, "caputo_derivative");
  check_input(f, "caputo_derivative");
  return caputo_derivative(f, L1Weights(f.mesh_ptr(), alpha));
}

GridFunction caputo_derivative(const GridFunction& f, const L1Weights& weights) {
  check_input(f, "caputo_derivative");
  if (&weights.mesh() != &f.mesh()) throw DomainError("caputo_derivative: weights built for a different mesh");
  const std::size_t size = f.size();
  const double scale = 1.0 / specialfn::gamma(2.0 - weights.alpha());

  std::vector<double> diff(size, 0.0);
  for (std::size_t j = 1; j < size; ++j) diff[j] = f[j] - f[j - 1];

  GridFunction out(f.mesh_ptr());
  std::vector<double> w(size, 0.0);
  for (std::size_t n = 1; n < size; ++n) {
    weights.row(n, w);
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) acc += w[j] * diff[j];
    out[n] = scale * acc;
  }
  return out;
}

GridFunction fractional_integral(const GridFunction& g, double alpha, double h0) {
  check_alpha(alpha, "fractional_integral");
  check_input(g, "fractional_integral");
  return fractional_integral(g, ProductTrapezoidWeights(g.mesh_ptr(), alpha), h0);
}

GridFunction fractional_integral(const GridFunction& g, const ProductTrapezoidWeights& weights, double h0) {
  check_input(g, "fractional_integral");
  if (&weights.mesh() != &g.mesh()) throw DomainError("fractional_integral: weights built for a different mesh");
  const std::size_t size = g.size();
  const double scale = 1.0 / specialfn::gamma(weights.alpha());

  GridFunction out(g.mesh_ptr());
  out[0] = h0;
  std::vector<double> w(size, 0.0);
  for (std::size_t n = 1; n < size; ++n) {
    weights.row(n, w);
    double acc = 0.0;
    for (std::size_t j = 0; j <= n; ++j) acc += w[j] * g[j];
    out[n] = h0 + scale * acc;
  }
  return out;
}

}  // namespace fdelab::fracops
