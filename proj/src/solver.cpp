#include "fdelab/solver.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fdelab/error.hpp"
#include "fdelab/fracops.hpp"
#include "fdelab/specialfn.hpp"

namespace fdelab::solver {

namespace {

constexpr double kSaturation = 1.0 - 1e-9;

void require_finite(double v, std::size_t node, const char* what) {
  if (!std::isfinite(v)) {
    throw DivergenceError(std::string("solve_fde: non-finite ") + what + " at node " + std::to_string(node), node - 1);
  }
}

}  // namespace

Solution solve_fde(const FdeProblem& problem) {
  if (!(problem.alpha > 0.0 && problem.alpha < 1.0)) {
    throw DomainError("solve_fde: alpha must lie in (0, 1), got " + std::to_string(problem.alpha));
  }
  if (!problem.mesh) throw DomainError("solve_fde: no mesh");
  const Mesh& mesh = *problem.mesh;
  if (!mesh.starts_at_zero()) throw DomainError("solve_fde: mesh must start at t = 0");
  if (problem.q.domain_start() > 0.0) {
    throw DomainError("solve_fde: q = " + problem.q.describe() +
                      " is not defined at t = 0; verify closed forms with residual_fde on [t0, T] instead");
  }
  if (!problem.q.defined_at(mesh.end())) {
    throw DomainError("solve_fde: q = " + problem.q.describe() + " does not cover the mesh");
  }
  if (!std::isfinite(problem.x0) || !std::isfinite(problem.y0)) throw DomainError("solve_fde: non-finite initial data");

  const std::size_t size = mesh.size();
  std::vector<double> qv(size);
  for (std::size_t i = 0; i < size; ++i) qv[i] = problem.q(mesh[i]);

  const fracops::ProductTrapezoidWeights weights(problem.mesh, problem.alpha);
  const double inv_gamma = 1.0 / specialfn::gamma(problem.alpha);

  GridFunction x(problem.mesh);
  GridFunction y(problem.mesh);
  x[0] = problem.x0;
  y[0] = problem.y0;

  std::vector<double> w(size, 0.0);
  for (std::size_t n = 1; n < size; ++n) {
    weights.row(n, w);
    double history = 0.0;
    for (std::size_t j = 0; j < n; ++j) history += w[j] * y[j];
    const double half_h = 0.5 * mesh.step(n - 1);

    // x_n = b + d y_n,  y_n = a - c x_n
    const double b = problem.x0 + inv_gamma * history;
    const double d = inv_gamma * w[n];
    const double a = y[n - 1] - half_h * qv[n - 1] * x[n - 1];
    const double c = half_h * qv[n];
    const double det = 1.0 + d * c;
    if (det == 0.0) throw DivergenceError("solve_fde: singular update at node " + std::to_string(n), n - 1);

    x[n] = (b + d * a) / det;
    y[n] = a - c * x[n];
    require_finite(x[n], n, "x");
    require_finite(y[n], n, "x^(alpha)");
  }

  GridFunction yprime(problem.mesh);
  for (std::size_t i = 0; i < size; ++i) yprime[i] = -qv[i] * x[i];

  // x'(t) = (1/Gamma(alpha)) [y0 t^(alpha-1) + int_0^t (t - s)^(alpha-1) y'(s) ds]
  GridFunction xprime(problem.mesh);
  if (problem.y0 != 0.0) {
    xprime.set_missing(0);
  } else {
    xprime[0] = 0.0;
  }
  for (std::size_t n = 1; n < size; ++n) {
    weights.row(n, w);
    double acc = 0.0;
    for (std::size_t j = 0; j <= n; ++j) acc += w[j] * yprime[j];
    xprime[n] = inv_gamma * (problem.y0 * std::pow(mesh[n], problem.alpha - 1.0) + acc);
  }

  return Solution{problem.mesh, std::move(x), std::move(y), std::move(yprime), std::move(xprime)};
}

GridFunction differentiate(const GridFunction& f) {
  const Mesh& m = f.mesh();
  const std::size_t size = f.size();
  if (size < 3) throw SizeError("differentiate: need at least 3 nodes");
  GridFunction out(f.mesh_ptr());

  auto set = [&](std::size_t i, std::size_t i0, std::size_t i1, std::size_t i2, double c0, double c1, double c2) {
    if (f.missing(i0) || f.missing(i1) || f.missing(i2)) {
      out.set_missing(i);
    } else {
      out[i] = c0 * f[i0] + c1 * f[i1] + c2 * f[i2];
    }
  };

  {
    const double h1 = m[1] - m[0];
    const double h2 = m[2] - m[1];
    set(0, 0, 1, 2, -(2.0 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2)));
  }
  for (std::size_t i = 1; i + 1 < size; ++i) {
    const double h1 = m[i] - m[i - 1];
    const double h2 = m[i + 1] - m[i];
    set(i, i - 1, i, i + 1, -h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2)));
  }
  {
    const std::size_t n = size - 1;
    const double h1 = m[n - 1] - m[n - 2];
    const double h2 = m[n] - m[n - 1];
    set(n, n - 2, n - 1, n, h2 / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2), (2.0 * h2 + h1) / (h2 * (h1 + h2)));
  }
  return out;
}

GridFunction residual_fde(const GridFunction& x, const Coefficient& q, double alpha) {
  if (x.size() < 3) throw SizeError("residual_fde: need at least 3 nodes for differencing");
  const GridFunction caputo = fracops::caputo_derivative(x, alpha);
  const GridFunction rate = differentiate(caputo);
  GridFunction r(x.mesh_ptr());
  const Mesh& m = x.mesh();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = m[i];
    if (!(t > q.domain_start()) || !q.defined_at(t) || rate.missing(i)) {
      r.set_missing(i);
      continue;
    }
    r[i] = rate[i] + q(t) * x[i];
  }
  return r;
}

Solution solve_curvature(const CurvatureProblem& problem) {
  if (!problem.mesh) throw DomainError("solve_curvature: no mesh");
  if (!(std::abs(problem.u0) < 1.0)) throw DomainError("solve_curvature: |u0| must be < 1");
  const Mesh& mesh = *problem.mesh;
  if (!problem.q.defined_at(mesh.start()) || !problem.q.defined_at(mesh.end())) {
    throw DomainError("solve_curvature: q = " + problem.q.describe() + " does not cover " + mesh.describe());
  }

  const std::size_t size = mesh.size();
  GridFunction x(problem.mesh);
  GridFunction u(problem.mesh);
  x[0] = problem.x0;
  u[0] = problem.u0;

  auto slope = [](double uu) { return uu / std::sqrt(1.0 - uu * uu); };
  auto check = [&](double uu, std::size_t step) {
    if (!(std::abs(uu) < kSaturation)) {
      throw GradientBlowupError("solve_curvature: |Dx| reached 1 (x' unbounded) during step " + std::to_string(step),
                                step);
    }
  };

  for (std::size_t n = 0; n + 1 < size; ++n) {
    const double t = mesh[n];
    const double h = mesh.step(n);
    const double q0 = problem.q(t);
    const double qm = problem.q(t + 0.5 * h);
    const double q1 = problem.q(mesh[n + 1]);
    const double xn = x[n];
    const double un = u[n];

    const double k1x = slope(un);
    const double k1u = -q0 * xn;
    const double u2 = un + 0.5 * h * k1u;
    check(u2, n);
    const double k2x = slope(u2);
    const double k2u = -qm * (xn + 0.5 * h * k1x);
    const double u3 = un + 0.5 * h * k2u;
    check(u3, n);
    const double k3x = slope(u3);
    const double k3u = -qm * (xn + 0.5 * h * k2x);
    const double u4 = un + h * k3u;
    check(u4, n);
    const double k4x = slope(u4);
    const double k4u = -q1 * (xn + h * k3x);

    x[n + 1] = xn + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    u[n + 1] = un + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    check(u[n + 1], n);
    if (!std::isfinite(x[n + 1])) throw DivergenceError("solve_curvature: non-finite x", n);
  }

  GridFunction yprime(problem.mesh);
  GridFunction xprime(problem.mesh);
  for (std::size_t i = 0; i < size; ++i) {
    yprime[i] = -problem.q(mesh[i]) * x[i];
    xprime[i] = slope(u[i]);
  }
  return Solution{problem.mesh, std::move(x), std::move(u), std::move(yprime), std::move(xprime)};
}

}  // namespace fdelab::solver
