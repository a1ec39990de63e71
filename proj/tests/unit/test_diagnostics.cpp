#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fdelab/diagnostics.hpp"
#include "fdelab/error.hpp"
#include "fdelab/fracops.hpp"
#include "fdelab/solver.hpp"
#include "fdelab/specialfn.hpp"

using fdelab::Coefficient;
using fdelab::GridFunction;
using fdelab::Mesh;
namespace dg = fdelab::diagnostics;
namespace sv = fdelab::solver;
namespace sf = fdelab::specialfn;

namespace {

// Solution-shaped samples of a known x with y = x^(alpha) from the L1 rule.
sv::Solution sampled(fdelab::MeshPtr mesh, double alpha, auto&& x, auto&& dx) {
  sv::Solution s{mesh, GridFunction::sample(mesh, x), GridFunction(mesh), GridFunction(mesh), GridFunction(mesh)};
  s.y = fdelab::fracops::caputo_derivative(s.x, alpha);
  for (std::size_t i = 0; i < mesh->size(); ++i) {
    const double t = (*mesh)[i];
    const double d = dx(t);
    if (std::isfinite(d)) {
      s.xprime[i] = d;
    } else {
      s.xprime.set_missing(i);
    }
  }
  return s;
}

// w' = -w^2 - q by RK4 from w(t0) = w0, at the mesh nodes.
std::vector<double> riccati_rk4(double q, double w0, const Mesh& mesh) {
  auto f = [q](double w) { return -w * w - q; };
  std::vector<double> w(mesh.size());
  w[0] = w0;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const double h = mesh.step(i);
    const double k1 = f(w[i]);
    const double k2 = f(w[i] + 0.5 * h * k1);
    const double k3 = f(w[i] + 0.5 * h * k2);
    const double k4 = f(w[i] + h * k3);
    w[i + 1] = w[i] + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }
  return w;
}

// Riccati pair as a Solution: x = 1, y = x' = w, so S = 0 and w = y / x.
sv::Solution riccati_solution(double q, double w0, fdelab::MeshPtr mesh) {
  sv::Solution s{mesh, GridFunction(mesh), GridFunction(mesh), GridFunction(mesh), GridFunction(mesh)};
  const auto w = riccati_rk4(q, w0, *mesh);
  for (std::size_t i = 0; i < w.size(); ++i) {
    s.x[i] = 1.0;
    s.y[i] = w[i];
    s.xprime[i] = w[i];
  }
  return s;
}

sv::Solution ml_solution(double end, std::size_t n) {
  sv::FdeProblem p;
  p.alpha = 0.5;
  p.x0 = 1.0;
  p.q = Coefficient::constant(1.0);
  p.mesh = Mesh::uniform(0.0, end, n);
  return sv::solve_fde(p);
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("sign quantity of x = t turns negative past Gamma(1.5)^2") {
    const auto mesh = Mesh::uniform(0.0, 4.0, 400);
    const auto s = sampled(mesh, 0.5, [](double t) { return t; }, [](double) { return 1.0; });
    const auto S = dg::sign_quantity(s);
    const double cross = sf::gamma(1.5) * sf::gamma(1.5);
    for (std::size_t i = 1; i < S.size(); ++i) {
      const double t = (*mesh)[i];
      if (std::abs(t - cross) < 0.02) continue;
      CHECK((S[i] < 0.0) == (t > cross));
    }
    const auto entries = dg::negative_entries(S);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0] == doctest::Approx(cross).epsilon(1e-3));
  }

  TEST_CASE("sign quantity of t^beta beyond the crossover") {
    const double alpha = 0.5;
    const double beta = 0.25;
    const double c = sf::gamma(1.0 + beta) / sf::gamma(1.0 + beta - alpha);
    const double crossover = std::pow(beta / c, 1.0 / (1.0 - alpha));
    const auto mesh = Mesh::graded(10.0, 4096, 2.0);
    const auto s = sampled(
        mesh, alpha, [&](double t) { return std::pow(t, beta); },
        [&](double t) { return t > 0.0 ? beta * std::pow(t, beta - 1.0) : NAN; });
    const auto S = dg::sign_quantity(s);
    CHECK(S.missing(0));
    const auto q = Coefficient::power_law(fdelab::power_solution_coefficient(alpha, beta), -1.0 - alpha, 1.0);
    const auto R = dg::riccati_residual(s, q);
    for (std::size_t i = 1; i < S.size(); ++i) {
      if ((*mesh)[i] <= 1.2 * crossover) continue;
      CHECK(S[i] < 0.0);
      CHECK(R.residual[i] > 0.0);
    }
  }

  TEST_CASE("sign quantity of the trivial solution vanishes") {
    sv::FdeProblem p;
    p.mesh = Mesh::uniform(0.0, 2.0, 20);
    const auto s = sv::solve_fde(p);
    const auto S = dg::sign_quantity(s);
    for (std::size_t i = 0; i < S.size(); ++i) CHECK(S[i] == 0.0);
    const auto R = dg::riccati_residual(s, p.q);
    for (std::size_t i = 0; i < S.size(); ++i) {
      CHECK(R.residual[i] == 0.0);
      CHECK(R.w[i] == 0.0);
    }
    CHECK(R.masked == 0);
    CHECK(R.notes.size() == 2);
  }

  TEST_CASE("Riccati oracle: residual vanishes and the direct form agrees") {
    double prev = 1.0;
    for (std::size_t n : {400, 800, 1600}) {
      const auto mesh = Mesh::uniform(1.0, 9.0, n);
      const auto s = riccati_solution(0.1, 1.0, mesh);
      const auto R = dg::riccati_residual(s, Coefficient::constant(0.1));
      for (std::size_t i = 0; i < R.residual.size(); ++i) CHECK(R.residual[i] == 0.0);
      INFO("N = " << n << " gap " << R.max_consistency_gap);
      CHECK(R.max_consistency_gap < 0.5 * prev);
      prev = R.max_consistency_gap;
    }
    CHECK(prev < 1e-4);
  }

  TEST_CASE("residual and direct forms agree on a solver trajectory away from zeros of x") {
    // differencing error of w' grows like 1/dist^4 toward a zero of x
    double prev = 1.0;
    for (std::size_t n : {1000, 2000, 4000}) {
      const auto s = ml_solution(4.0, n);
      const auto R = dg::riccati_residual(s, Coefficient::constant(1.0));
      double gap = 0.0;
      for (std::size_t i = 1; i < s.x.size(); ++i) {
        if (std::abs(s.x[i]) < 0.1 || R.residual.missing(i) || R.direct.missing(i)) continue;
        gap = std::max(gap, std::abs(R.residual[i] - R.direct[i]));
      }
      INFO("N = " << n << " gap " << gap);
      CHECK(gap < 0.75 * prev);
      prev = gap;
    }
  }

  TEST_CASE("Riccati masking near zeros of x") {
    const auto mesh = Mesh::uniform(0.0, 1.0, 10);
    sv::Solution s{mesh, GridFunction(mesh), GridFunction(mesh), GridFunction(mesh), GridFunction(mesh)};
    CHECK_THROWS_AS(dg::riccati_residual(s, Coefficient::constant(1.0)), fdelab::EmptyResultError);
    s.x[3] = 2.0;
    s.x[4] = 1e-9;
    const auto R = dg::riccati_residual(s, Coefficient::constant(1.0));
    CHECK(R.masked == 10);
    CHECK_FALSE(R.w.missing(3));
    CHECK(R.w.missing(4));
    CHECK(R.residual.missing(4));
    CHECK(R.threshold == doctest::Approx(2e-8));
  }

  TEST_CASE("sign changes of cos") {
    const auto mesh = Mesh::uniform(0.0, 10.0, 1000);
    const auto f = GridFunction::sample(mesh, [](double t) { return std::cos(t); });
    const auto z = dg::detect_sign_changes(f);
    REQUIRE(z.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(z[k] - (k + 0.5) * std::numbers::pi) < 1e-3);
    const auto coarse = dg::detect_sign_changes(f, false);
    REQUIRE(coarse.size() == 3);
    CHECK(std::abs(coarse[0] - 0.5 * std::numbers::pi) < 0.01);
    CHECK(dg::detect_sign_changes(GridFunction::sample(mesh, [](double) { return 1.0; })).empty());
  }

  TEST_CASE("crossings are increasing and bracketed by opposite signs") {
    const auto mesh = Mesh::graded(20.0, 777, 1.7);
    auto f = GridFunction::sample(mesh, [](double t) { return std::sin(t * t / 3.0) + 0.05; });
    f.set_missing(300);
    const auto z = dg::detect_sign_changes(f);
    REQUIRE(z.size() > 10);
    std::size_t j = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (k > 0) CHECK(z[k] > z[k - 1]);
      while ((*mesh)[j + 1] <= z[k]) ++j;
      std::size_t lo = j;
      std::size_t hi = j + 1;
      if (f.missing(lo)) --lo;
      if (f.missing(hi)) ++hi;
      CHECK((*mesh)[lo] < z[k]);
      CHECK(z[k] < (*mesh)[hi]);
      CHECK(f[lo] * f[hi] < 0.0);
    }
  }

  TEST_CASE("Mittag-Leffler trajectory: crossing parity and the true zero set") {
    const auto s = ml_solution(40.0, 8192);
    const auto z = dg::detect_sign_changes(s.x);
    // E_1.5(-t^1.5) has exactly three real zeros
    REQUIRE(z.size() == 3);
    CHECK(std::abs(z[0] - 1.6452288706517797) < 1e-4);
    CHECK(std::abs(z[1] - 5.7437057577786766) < 1e-4);
    CHECK(std::abs(z[2] - 8.3764692595535194) < 1e-4);
    double sign = 1.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (k < z.size() && (*s.mesh)[i] > z[k]) {
        sign = -sign;
        ++k;
      }
      if (s.x[i] != 0.0) CHECK(s.x[i] * sign > 0.0);
    }
  }

  TEST_CASE("bound check on the Riccati oracle") {
    for (double eps : {2.5, 3.0}) {
      for (double t : {5.0, 10.0, 20.0}) {
        const auto b = dg::kamenev_bound_check(1.0, Coefficient::constant(0.1), eps, 1.0, t);
        CHECK(b.holds);
        CHECK(b.rhs == doctest::Approx(1.0 + eps * eps / (4.0 * (eps - 1.0) * t)));
        CHECK(b.lhs == doctest::Approx(0.1 * std::pow(t - 1.0, eps + 1.0) / ((eps + 1.0) * std::pow(t, eps))));
      }
    }
  }

  TEST_CASE("bound check on a positive curvature trajectory") {
    sv::CurvatureProblem p;
    p.x0 = 1.0;
    p.u0 = 0.5;
    p.q = Coefficient::constant(0.005);
    p.mesh = Mesh::uniform(1.0, 30.0, 2900);
    const auto s = sv::solve_curvature(p);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      REQUIRE(s.x[i] > 0.0);
      CHECK(s.y[i] * (s.xprime[i] - s.y[i]) >= -1e-14);
    }
    const auto b = dg::kamenev_bound_check(s.y[0] / s.x[0], p.q, 3.0, 1.0, 30.0);
    CHECK(b.holds);
  }

  TEST_CASE("bound check with q = 0 and errors") {
    const auto b = dg::kamenev_bound_check(-0.4, Coefficient::constant(0.0), 3.0, 2.0, 9.0);
    CHECK(b.lhs == 0.0);
    CHECK(b.holds);
    CHECK_THROWS_AS(dg::kamenev_bound_check(1.0, Coefficient::constant(0.0), 1.0, 1.0, 2.0), fdelab::DomainError);
    CHECK_THROWS_AS(dg::kamenev_bound_check(1.0, Coefficient::constant(0.0), 3.0, 2.0, 2.0), fdelab::DomainError);
  }

  TEST_CASE("limit of x^(alpha) for closed-form cases") {
    sv::FdeProblem p;
    p.alpha = 0.5;
    p.x0 = 1.0;
    p.y0 = 2.0;
    p.mesh = Mesh::uniform(0.0, 10.0, 100);
    const auto flat = dg::limit_estimate_xalpha(sv::solve_fde(p), 0.3);
    CHECK(flat.mean == 2.0);
    CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(flat.nodes == 31);
    p.x0 = 0.0;
    p.y0 = sf::gamma(1.5);
    CHECK(dg::limit_estimate_xalpha(sv::solve_fde(p), 0.5).mean == doctest::Approx(sf::gamma(1.5)).epsilon(1e-14));
    CHECK_THROWS_AS(dg::limit_estimate_xalpha(sv::solve_fde(p), 1.0), fdelab::DomainError);
  }

  TEST_CASE("limit of x^(alpha) for the Mittag-Leffler trajectory") {
    // x^(alpha) = -t E_{1.5,2}(-t^1.5) ~ -1/sqrt(pi t); mpmath at t = 40: -0.0892035970303
    const auto s = ml_solution(40.0, 8192);
    CHECK(s.y[s.y.size() - 1] == doctest::Approx(-0.0892035970303).epsilon(1e-4));
    const auto est = dg::limit_estimate_xalpha(s, 0.25);
    const double lo = -1.0 / std::sqrt(std::numbers::pi * 30.0);
    const double hi = -1.0 / std::sqrt(std::numbers::pi * 40.0);
    CHECK(est.mean > lo);
    CHECK(est.mean < hi);
    CHECK(est.slope > 0.0);
  }
}
