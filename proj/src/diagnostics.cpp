#include "fdelab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fdelab/averaging.hpp"
#include "fdelab/error.hpp"

namespace fdelab::diagnostics {

namespace {

struct Crossing {
  double t;
  bool to_negative;
};

std::vector<Crossing> crossings(const GridFunction& f, bool refine) {
  std::vector<Crossing> out;
  const Mesh& m = f.mesh();
  std::size_t prev = f.size();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.missing(i)) continue;
    if (prev != f.size()) {
      const double a = f[prev];
      const double b = f[i];
      if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
        const double ta = m[prev];
        const double tb = m[i];
        double t = 0.5 * (ta + tb);
        if (refine) {
          // root of the linear interpolant, kept strictly inside (ta, tb)
          t = ta + (tb - ta) * (a / (a - b));
          t = std::clamp(t, std::nextafter(ta, tb), std::nextafter(tb, ta));
        }
        out.push_back({t, b < 0.0});
      }
    }
    prev = i;
  }
  return out;
}

}  // namespace

GridFunction sign_quantity(const solver::Solution& sol) {
  GridFunction s(sol.mesh);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (sol.xprime.missing(i) || sol.y.missing(i)) {
      s.set_missing(i);
      continue;
    }
    const double y = sol.y[i];
    s[i] = y * (sol.xprime[i] - y);
  }
  return s;
}

RiccatiResult riccati_residual(const solver::Solution& sol, const Coefficient& q, double relative_threshold) {
  const std::size_t size = sol.x.size();
  RiccatiResult out{GridFunction(sol.mesh), GridFunction(sol.mesh), GridFunction(sol.mesh), 0.0, 0.0, 0, {}};
  out.threshold = relative_threshold * sol.x.max_abs();

  const GridFunction S = sign_quantity(sol);
  const Mesh& m = *sol.mesh;
  for (std::size_t i = 0; i < size; ++i) {
    const double x = sol.x[i];
    if (sol.x.missing(i) || sol.y.missing(i) || !(std::abs(x) > out.threshold)) {
      out.w.set_missing(i);
      out.residual.set_missing(i);
      ++out.masked;
      continue;
    }
    out.w[i] = sol.y[i] / x;
    if (S.missing(i)) {
      out.residual.set_missing(i);
    } else {
      out.residual[i] = -S[i] / (x * x);
    }
  }
  if (out.masked == size) throw EmptyResultError("riccati_residual: every node is masked (|x| below threshold)");

  const GridFunction wprime = solver::differentiate(out.w);
  for (std::size_t i = 0; i < size; ++i) {
    if (wprime.missing(i) || out.w.missing(i) || !q.defined_at(m[i])) {
      out.direct.set_missing(i);
      continue;
    }
    out.direct[i] = wprime[i] + out.w[i] * out.w[i] + q(m[i]);
    if (!out.residual.missing(i)) {
      out.max_consistency_gap = std::max(out.max_consistency_gap, std::abs(out.residual[i] - out.direct[i]));
    }
  }

  std::ostringstream os;
  os.precision(17);
  os << "masked " << out.masked << " node(s) with |x| <= " << out.threshold;
  out.notes.push_back(os.str());
  os.str("");
  os << "max |(-S/x^2) - (w' + w^2 + q)| = " << out.max_consistency_gap << " (w' by finite differences)";
  out.notes.push_back(os.str());
  return out;
}

std::vector<double> detect_sign_changes(const GridFunction& f, bool refine) {
  std::vector<double> out;
  for (const Crossing& c : crossings(f, refine)) out.push_back(c.t);
  return out;
}

std::vector<double> negative_entries(const GridFunction& S) {
  std::vector<double> out;
  for (const Crossing& c : crossings(S, true)) {
    if (c.to_negative) out.push_back(c.t);
  }
  return out;
}

BoundCheck kamenev_bound_check(double w_T, const Coefficient& q, double epsilon, double T, double t) {
  if (!(epsilon > 1.0)) throw DomainError("kamenev_bound_check: epsilon must be > 1");
  if (!(T > 0.0 && t > T)) throw DomainError("kamenev_bound_check: need t > T > 0");
  BoundCheck out;
  out.lhs = averaging::kamenev_average(q, epsilon, T, t);
  out.rhs = std::abs(w_T) + epsilon * epsilon / (4.0 * (epsilon - 1.0) * t);
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

LimitEstimate limit_estimate_xalpha(const solver::Solution& sol, double window_fraction) {
  if (sol.y.size() < 10) throw SizeError("limit_estimate_xalpha: need at least 10 nodes");
  if (!(window_fraction > 0.0 && window_fraction < 1.0)) {
    throw DomainError("limit_estimate_xalpha: window_fraction must lie in (0, 1)");
  }
  const std::size_t size = sol.y.size();
  const std::size_t count =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(size))));
  const Mesh& m = *sol.mesh;

  double st = 0.0;
  double sy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = size - count; i < size; ++i) {
    if (sol.y.missing(i)) continue;
    st += m[i];
    sy += sol.y[i];
    ++n;
  }
  LimitEstimate out;
  out.nodes = n;
  if (n == 0) return out;
  const double mt = st / static_cast<double>(n);
  out.mean = sy / static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = size - count; i < size; ++i) {
    if (sol.y.missing(i)) continue;
    sxx += (m[i] - mt) * (m[i] - mt);
    sxy += (m[i] - mt) * (sol.y[i] - out.mean);
  }
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return out;
}

}  // namespace fdelab::diagnostics
