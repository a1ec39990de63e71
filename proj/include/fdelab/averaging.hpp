#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fdelab/coefficient.hpp"

namespace fdelab::averaging {

/// Parameters of the finite-horizon Kamenev test.
struct KamenevParams {
  double epsilon = 3.0;
  double t0 = 1.0;
  std::vector<double> schedule;

  /// 10, 20, ..., 200.
  static std::vector<double> default_schedule();
  /// Throws DomainError on invalid input; returns true when epsilon lies in
  /// (1, 2], which is accepted but flagged.
  bool validate() const;
};

enum class Verdict { diverging_evidence, bounded_evidence, inconclusive };

std::string to_string(Verdict v);

struct KamenevVerdict {
  std::vector<std::pair<double, double>> values;  // (t, K(t))
  Verdict verdict = Verdict::inconclusive;
  double slope = 0.0;      // least squares K ~ slope t + intercept, top half
  double intercept = 0.0;
  double fit_residual = 0.0;      // RMS residual / mean |K|, top half
  double flatness_ratio = 0.0;    // sup K / K(mid-schedule)
  std::optional<double> increment_decay;  // log-log slope of K increments, top half
  bool epsilon_warning = false;
  std::string rule;  // which criterion decided the verdict
};

/// Decision thresholds.
inline constexpr double kFitResidualMax = 0.1;
inline constexpr double kFlatnessBand = 0.05;
inline constexpr double kSummableDecay = -1.1;

/// K(t) = t^-eps int_{t0}^t (t - s)^eps q(s) ds by composite 5-point
/// Gauss-Legendre, doubling the panel count until two passes agree to 1e-10.
double kamenev_average(const Coefficient& q, double epsilon, double t0, double t);

KamenevVerdict classify_kamenev(const Coefficient& q, const KamenevParams& params);

/// An improper integral that may be finite or diverge.
struct IntegralValue {
  bool diverges = false;
  double value = 0.0;
};

enum class Tristate { no, yes, inconclusive };

std::string to_string(Tristate t);

struct ConditionsReport {
  IntegralValue weighted_first;   // int_0^inf t^(1+alpha) |q(t)| dt
  IntegralValue weighted_second;  // int_0^inf t^alpha |q(t)| dt
  double gamma_bound = 0.0;       // Gamma(1 + alpha)
  Tristate passes = Tristate::no;
  bool analytic = true;
  std::string note;
};

/// Checks int t^(1+a)|q| < inf and int t^a |q| < Gamma(1 + a). q is taken as
/// zero below its domain_start. Closed-form families decide convergence from
/// the exponent; tabulated q is integrated over its hull and reported
/// inconclusive.
ConditionsReport check_integrability_conditions(const Coefficient& q, double alpha, double tail_horizon);

/// Composite 5-point Gauss-Legendre on [a, b] with the given panel count.
template <typename F>
double gauss_legendre5(F&& f, double a, double b, std::size_t panels);

}  // namespace fdelab::averaging

#include "fdelab/detail/gauss_legendre.hpp"
