#pragma once

#include <limits>

namespace fdelab::specialfn {

/// Euler Gamma function. Relative error below 1e-12 on [-20, 50] away from
/// the poles. Throws DomainError at 0, -1, -2, ...
double gamma(double x);

/// log|Gamma(x)|, same domain as gamma().
double log_abs_gamma(double x);

/// sin(pi * x) with exact argument reduction, so that it vanishes at integers.
double sin_pi(double x);

enum class MlMethod { taylor, asymptotic };

struct MlEvalResult {
  double value = 0.0;
  MlMethod method = MlMethod::taylor;
  double est_abs_error = 0.0;
};

struct MlOptions {
  /// |z| up to which the power series is used.
  double z_switch = 30.0;
  /// Beyond z_switch, fall back to the power series whenever its estimated
  /// error is smaller than the asymptotic one.
  bool pick_smaller_error = true;
  /// Throw AccuracyLossError if est_abs_error exceeds this.
  double max_abs_error = std::numeric_limits<double>::infinity();
  int max_terms = 500;
};

/// One-parameter Mittag-Leffler function E_g(z) for real z and g in (0, 2].
MlEvalResult mittag_leffler(double g, double z, const MlOptions& options = {});

/// Power series branch alone: sum_k z^k / Gamma(1 + g k).
MlEvalResult mittag_leffler_taylor(double g, double z, const MlOptions& options = {});

/// Large-|z| branch alone: exponential contributions of the roots in the
/// sector plus the algebraic series -sum_{k>=1} z^{-k} / Gamma(1 - g k),
/// truncated at its smallest term.
MlEvalResult mittag_leffler_asymptotic(double g, double z);

/// Asymptotic spacing in t between consecutive zeros of E_g(-A t^g),
/// g in (1, 2), A > 0.
double ml_zero_spacing(double g, double A);

}  // namespace fdelab::specialfn
