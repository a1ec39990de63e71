#include "fdelab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <variant>

#include "fdelab/error.hpp"
#include "fdelab/specialfn.hpp"

namespace fdelab::averaging {

namespace {

constexpr std::size_t kMaxPanels = std::size_t{1} << 20;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

std::size_t initial_panels(const Coefficient& q, double length) {
  double per_unit = 2.0;
  if (const auto* s = std::get_if<SinusoidQ>(&q.family())) per_unit = std::max(per_unit, std::abs(s->omega));
  return std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(per_unit * length)));
}

// int_lo^hi |C| t^s dt for lo > 0, numerically in log variables.
double power_integral(double C, double s, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  const double a = std::log(lo);
  const double b = std::log(hi);
  const std::size_t panels = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(8.0 * (b - a) * (1.0 + std::abs(s + 1.0)))));
  return std::abs(C) * gauss_legendre5([s](double v) { return std::exp((s + 1.0) * v); }, a, b, panels);
}

}  // namespace

std::vector<double> KamenevParams::default_schedule() {
  std::vector<double> s;
  for (int t = 10; t <= 200; t += 10) s.push_back(static_cast<double>(t));
  return s;
}

bool KamenevParams::validate() const {
  if (!(epsilon > 1.0)) throw DomainError("Kamenev epsilon must be > 1, got " + std::to_string(epsilon));
  if (!(t0 > 0.0)) throw DomainError("Kamenev t0 must be > 0");
  if (schedule.size() < 4) throw SizeError("Kamenev schedule needs at least 4 evaluation times");
  if (!(schedule.front() > t0)) throw DomainError("Kamenev schedule must start after t0");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i] > schedule[i - 1])) throw DomainError("Kamenev schedule must be strictly increasing");
  }
  return epsilon <= 2.0;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::diverging_evidence: return "diverging_evidence";
    case Verdict::bounded_evidence: return "bounded_evidence";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Tristate t) {
  switch (t) {
    case Tristate::no: return "false";
    case Tristate::yes: return "true";
    case Tristate::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double kamenev_average(const Coefficient& q, double epsilon, double t0, double t) {
  if (!(t0 > 0.0)) throw DomainError("kamenev_average: t0 must be > 0");
  if (!(t > t0)) throw DomainError("kamenev_average: need t > t0");
  if (!(epsilon > 1.0)) throw DomainError("kamenev_average: epsilon must be > 1");
  if (!q.defined_at(t0) || !q.defined_at(t)) {
    throw DomainError("kamenev_average: q = " + q.describe() + " is not defined on the whole range");
  }

  // ((t - s) / t)^eps keeps the weight in [0, 1].
  auto integrand = [&](double s) { return std::pow((t - s) / t, epsilon) * q(s); };
  auto magnitude = [&](double s) { return std::pow((t - s) / t, epsilon) * std::abs(q(s)); };

  std::size_t panels = initial_panels(q, t - t0);
  double coarse = gauss_legendre5(integrand, t0, t, panels);
  while (panels < kMaxPanels) {
    panels *= 2;
    const double fine = gauss_legendre5(integrand, t0, t, panels);
    const double scale = std::max(std::abs(fine), gauss_legendre5(magnitude, t0, t, panels));
    if (std::abs(fine - coarse) <= 1e-10 * scale) return fine;
    coarse = fine;
  }
  return coarse;
}

KamenevVerdict classify_kamenev(const Coefficient& q, const KamenevParams& params) {
  KamenevVerdict out;
  out.epsilon_warning = params.validate();

  const std::size_t m = params.schedule.size();
  std::vector<double> ks(m);
  for (std::size_t i = 0; i < m; ++i) {
    ks[i] = kamenev_average(q, params.epsilon, params.t0, params.schedule[i]);
    out.values.emplace_back(params.schedule[i], ks[i]);
  }

  const std::size_t mid = m / 2;
  std::vector<double> top_t(params.schedule.begin() + static_cast<std::ptrdiff_t>(mid), params.schedule.end());
  std::vector<double> top_k(ks.begin() + static_cast<std::ptrdiff_t>(mid), ks.end());

  const LineFit fit = least_squares(top_t, top_k);
  double mean_abs = 0.0;
  for (double k : top_k) mean_abs += std::abs(k);
  mean_abs /= static_cast<double>(top_k.size());
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.fit_residual = mean_abs > 0.0 ? fit.rms / mean_abs : std::numeric_limits<double>::infinity();

  const double sup = *std::max_element(ks.begin(), ks.end());
  const double at_mid = ks[mid];
  out.flatness_ratio = at_mid > 0.0 ? sup / at_mid : std::numeric_limits<double>::infinity();

  bool increasing = true;
  std::vector<double> log_t;
  std::vector<double> log_d;
  for (std::size_t i = 0; i + 1 < top_k.size(); ++i) {
    const double d = top_k[i + 1] - top_k[i];
    if (!(d > 0.0)) {
      increasing = false;
      break;
    }
    log_t.push_back(std::log(0.5 * (top_t[i] + top_t[i + 1])));
    log_d.push_back(std::log(d));
  }
  if (increasing && log_t.size() >= 2) out.increment_decay = least_squares(log_t, log_d).slope;

  if (at_mid > 0.0 && sup <= (1.0 + kFlatnessBand) * at_mid) {
    out.verdict = Verdict::bounded_evidence;
    out.rule = "flatness: sup K <= 1.05 K(mid-schedule)";
  } else if (out.increment_decay && *out.increment_decay < kSummableDecay) {
    out.verdict = Verdict::bounded_evidence;
    out.rule = "summable increments: K increments decay faster than t^-1.1";
  } else if (increasing && fit.slope > 0.0 && out.fit_residual < kFitResidualMax) {
    out.verdict = Verdict::diverging_evidence;
    out.rule = "linear growth: increasing, slope > 0, relative fit residual < 0.1";
  } else {
    out.verdict = Verdict::inconclusive;
    out.rule = "no criterion met";
  }
  return out;
}

ConditionsReport check_integrability_conditions(const Coefficient& q, double alpha, double tail_horizon) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("check_integrability_conditions: alpha must lie in (0, 1)");
  if (!(tail_horizon > 0.0)) throw DomainError("check_integrability_conditions: tail_horizon must be > 0");

  ConditionsReport rep;
  rep.gamma_bound = specialfn::gamma(1.0 + alpha);
  const double start = q.domain_start();

  const auto& fam = q.family();
  if (const auto* c = std::get_if<ConstantQ>(&fam)) {
    rep.weighted_first.diverges = rep.weighted_second.diverges = (c->A != 0.0);
    rep.note = c->A != 0.0 ? "constant q: integrands grow like t^(1+alpha) and t^alpha" : "q = 0";
  } else if (const auto* s = std::get_if<SinusoidQ>(&fam)) {
    const bool zero = (s->a == 0.0 && s->b == 0.0);
    rep.weighted_first.diverges = rep.weighted_second.diverges = !zero;
    rep.note = zero ? "q = 0" : "sinusoidal q: |q| has a positive mean, integrands grow";
  } else if (const auto* p = std::get_if<PowerLawQ>(&fam)) {
    auto decide = [&](double exponent, IntegralValue& out) {
      // integral of |C| t^exponent over [start, inf)
      if (p->C == 0.0) return;
      const bool at_infinity = exponent < -1.0;
      const bool at_zero = start > 0.0 || exponent > -1.0;
      if (!at_infinity || !at_zero) {
        out.diverges = true;
        return;
      }
      const double horizon = std::max(tail_horizon, start);
      const double tail = std::abs(p->C) * std::pow(horizon, exponent + 1.0) / (-exponent - 1.0);
      out.value = power_integral(p->C, exponent, start, horizon) + tail;
    };
    decide(1.0 + alpha + p->p, rep.weighted_first);
    decide(alpha + p->p, rep.weighted_second);
    std::ostringstream os;
    os.precision(17);
    os << "power law: integrands ~ t^" << (1.0 + alpha + p->p) << " and t^" << (alpha + p->p)
       << ", finite at infinity iff exponent < -1; q taken as 0 below t = " << start;
    rep.note = os.str();
  } else {
    const auto& tab = std::get<TabulatedQ>(fam).table;
    const Mesh& m = tab.mesh();
    double first = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      const double lo = std::max(m[i], start);
      const double hi = m[i + 1];
      if (!(hi > lo)) continue;
      first += gauss_legendre5([&](double t) { return std::pow(t, 1.0 + alpha) * std::abs(q(t)); }, lo, hi, 2);
      second += gauss_legendre5([&](double t) { return std::pow(t, alpha) * std::abs(q(t)); }, lo, hi, 2);
    }
    rep.weighted_first.value = first;
    rep.weighted_second.value = second;
    rep.analytic = false;
    rep.passes = Tristate::inconclusive;
    rep.note = "tabulated q: integrals over the table hull only, tail beyond t = " + std::to_string(m.end()) +
               " unknown";
    return rep;
  }

  const bool ok = !rep.weighted_first.diverges && !rep.weighted_second.diverges &&
                  rep.weighted_second.value < rep.gamma_bound;
  rep.passes = ok ? Tristate::yes : Tristate::no;
  return rep;
}

}  // namespace fdelab::averaging
