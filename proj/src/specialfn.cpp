#include "fdelab/specialfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fdelab/error.hpp"

namespace fdelab::specialfn {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

// Stirling correction coefficients B_{2k} / (2k (2k - 1)), k = 1..7.
constexpr std::array<double, 7> kStirling = {
    1.0 / 12.0,           -1.0 / 360.0,  1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0, 1.0 / 156.0,
};

// Below this the argument is shifted upward before the asymptotic series.
constexpr double kStirlingMin = 10.0;

double stirling_correction(double y) {
  const double inv = 1.0 / y;
  const double inv2 = inv * inv;
  double acc = 0.0;
  for (auto it = kStirling.rbegin(); it != kStirling.rend(); ++it) acc = acc * inv2 + *it;
  return acc * inv;
}

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

[[noreturn]] void throw_pole(const char* fn, double x) {
  throw DomainError(std::string(fn) + ": pole at x = " + std::to_string(static_cast<long long>(x)));
}

// Gamma for y >= 0.5 (no reflection needed).
double gamma_positive(double x) {
  double y = x;
  double shift = 1.0;
  while (y < kStirlingMin) {
    shift *= y;
    y += 1.0;
  }
  // y^(y-1/2) e^-y split in two halves so it does not overflow before 171.
  const double half = std::pow(y, 0.5 * (y - 0.5));
  const double g = std::sqrt(2.0 * kPi) * half * (half * std::exp(-y)) * std::exp(stirling_correction(y));
  return g / shift;
}

double log_gamma_positive(double x) {
  double y = x;
  double shift = 1.0;
  while (y < kStirlingMin) {
    shift *= y;
    y += 1.0;
  }
  return (y - 0.5) * std::log(y) - y + 0.5 * std::log(2.0 * kPi) + stirling_correction(y) - std::log(shift);
}

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

void check_order(double g) {
  if (!(g > 0.0 && g <= 2.0)) {
    throw DomainError("mittag_leffler: order must lie in (0, 2], got " + std::to_string(g));
  }
}

// k-th Taylor term z^k / Gamma(1 + g k) and a bound on its relative rounding error.
struct Term {
  double value;
  double rel_err;
};

Term taylor_term(double g, double z, int k) {
  const double arg = 1.0 + g * k;
  const double log_abs_z = std::log(std::abs(z));
  const double log_mag_z = k * log_abs_z;
  const double sign = (z < 0.0 && (k % 2 == 1)) ? -1.0 : 1.0;
  if (arg <= 170.0 && std::abs(log_mag_z) < 690.0) {
    return {std::pow(z, k) / gamma_positive(arg), 8.0 * kEps};
  }
  const double lg = log_gamma_positive(arg);
  const double log_term = log_mag_z - lg;
  return {sign * std::exp(log_term), kEps * (8.0 + std::abs(log_mag_z) + std::abs(lg))};
}

}  // namespace

double sin_pi(double x) {
  double r = std::remainder(x, 2.0);  // exact, r in [-1, 1]
  double sign = 1.0;
  if (r < 0.0) {
    sign = -1.0;
    r = -r;
  }
  if (r > 0.5) r = 1.0 - r;
  if (r == 0.0) return 0.0;
  return sign * std::sin(kPi * r);
}

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_pole(x)) throw_pole("gamma", x);
  if (x < 0.5) return kPi / (sin_pi(x) * gamma_positive(1.0 - x));
  return gamma_positive(x);
}

double log_abs_gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_pole(x)) throw_pole("log_abs_gamma", x);
  if (x < 0.5) return std::log(kPi) - std::log(std::abs(sin_pi(x))) - log_gamma_positive(1.0 - x);
  return log_gamma_positive(x);
}

MlEvalResult mittag_leffler_taylor(double g, double z, const MlOptions& options) {
  check_order(g);
  if (z == 0.0) return {1.0, MlMethod::taylor, 0.0};

  CompensatedSum sum;
  sum.add(1.0);
  double abs_sum = 1.0;
  double rounding = 0.0;
  double tail = std::numeric_limits<double>::infinity();
  const double log_abs_z = std::log(std::abs(z));

  for (int k = 1; k <= options.max_terms; ++k) {
    const Term t = taylor_term(g, z, k);
    // Ratio |t_{k+1} / t_k| is decreasing in k, so it bounds the whole tail.
    const double ratio = std::exp(log_abs_z + log_gamma_positive(1.0 + g * k) - log_gamma_positive(1.0 + g * (k + 1)));
    if (std::abs(t.value) < 1e-16 * std::abs(sum.value()) && ratio < 1.0) {
      tail = std::abs(t.value) / (1.0 - ratio);
      break;
    }
    sum.add(t.value);
    abs_sum += std::abs(t.value);
    rounding += std::abs(t.value) * t.rel_err;
    if (k == options.max_terms && ratio < 1.0) {
      tail = std::abs(t.value) * ratio / (1.0 - ratio);
    }
  }

  const double value = sum.value();
  const double est = tail + rounding + 2.0 * kEps * std::abs(value);
  if (!std::isfinite(est) || !std::isfinite(value) || !std::isfinite(abs_sum)) {
    throw AccuracyLossError("mittag_leffler: power series did not converge for z = " + std::to_string(z),
                            value, std::numeric_limits<double>::infinity());
  }
  return {value, MlMethod::taylor, est};
}

MlEvalResult mittag_leffler_asymptotic(double g, double z) {
  check_order(g);
  if (z == 0.0) {
    throw DomainError("mittag_leffler_asymptotic: z must be nonzero");
  }
  const double abs_z = std::abs(z);
  const double rho = std::pow(abs_z, 1.0 / g);

  double exp_part = 0.0;
  if (z > 0.0) {
    exp_part = std::exp(rho) / g;
  } else if (g == 2.0) {
    exp_part = std::cos(rho);
  } else if (g == 1.0) {
    exp_part = std::exp(z);
  } else if (g > 1.0) {
    // Conjugate pair of roots exp(+-i pi / g) inside the sector.
    exp_part = (2.0 / g) * std::exp(rho * std::cos(kPi / g)) * std::cos(rho * std::sin(kPi / g));
  }

  // 1/Gamma(1 - g k) = sin(pi g k) Gamma(g k) / pi.
  const bool integer_order = (g == std::floor(g));
  CompensatedSum alg;
  double abs_alg = 0.0;
  const double log_abs_z = std::log(abs_z);
  double prev_envelope = std::numeric_limits<double>::infinity();
  double smallest = 0.0;
  for (int k = 1; k <= 500; ++k) {
    const double log_env = log_gamma_positive(g * k) - k * log_abs_z - std::log(kPi);
    const double envelope = std::exp(log_env);
    if (envelope >= prev_envelope) {
      smallest = prev_envelope;
      break;
    }
    prev_envelope = envelope;
    smallest = envelope;
    const double zk_sign = (z < 0.0 && (k % 2 == 1)) ? -1.0 : 1.0;
    const double term = -zk_sign * sin_pi(g * k) * envelope;
    alg.add(term);
    abs_alg += std::abs(term);
  }
  // Super-asymptotic truncation: the smallest envelope bounds the error.
  const double value = exp_part + alg.value();
  double est = 8.0 * kEps * (abs_alg + std::abs(exp_part)) * (1.0 + std::log1p(rho));
  if (!integer_order) est += 2.0 * smallest;
  if (!std::isfinite(value) || !std::isfinite(est)) {
    throw AccuracyLossError("mittag_leffler: asymptotic expansion overflowed for z = " + std::to_string(z), value,
                            std::numeric_limits<double>::infinity());
  }
  return {value, MlMethod::asymptotic, est};
}

MlEvalResult mittag_leffler(double g, double z, const MlOptions& options) {
  check_order(g);
  if (std::isnan(z)) throw DomainError("mittag_leffler: z is NaN");

  MlEvalResult result;
  if (std::abs(z) <= options.z_switch) {
    result = mittag_leffler_taylor(g, z, options);
  } else {
    result = mittag_leffler_asymptotic(g, z);
    if (options.pick_smaller_error && result.est_abs_error > 4.0 * kEps * std::max(1.0, std::abs(result.value))) {
      try {
        const MlEvalResult series = mittag_leffler_taylor(g, z, options);
        if (series.est_abs_error < result.est_abs_error) result = series;
      } catch (const AccuracyLossError&) {
      }
    }
  }

  if (result.est_abs_error > options.max_abs_error) {
    throw AccuracyLossError("mittag_leffler: error estimate " + std::to_string(result.est_abs_error) +
                                " exceeds requested " + std::to_string(options.max_abs_error),
                            result.value, result.est_abs_error);
  }
  return result;
}

double ml_zero_spacing(double g, double A) {
  if (!(g > 1.0 && g < 2.0)) throw DomainError("ml_zero_spacing: order must lie in (1, 2)");
  if (!(A > 0.0)) throw DomainError("ml_zero_spacing: A must be positive");
  return kPi / (std::pow(A, 1.0 / g) * std::sin(kPi / g));
}

}  // namespace fdelab::specialfn
