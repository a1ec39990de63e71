#pragma once

#include <optional>
#include <string>
#include <variant>

#include "fdelab/mesh.hpp"

namespace fdelab {

/// q(t) = A
struct ConstantQ {
  double A = 0.0;
};

/// q(t) = C t^p
struct PowerLawQ {
  double C = 0.0;
  double p = 0.0;
};

/// q(t) = a sin(omega t) + b
struct SinusoidQ {
  double a = 0.0;
  double b = 0.0;
  double omega = 1.0;
};

/// Linear interpolation of samples, only inside the mesh hull.
struct TabulatedQ {
  GridFunction table;
};

/// The functional coefficient q of the equation, defined on [domain_start, inf)
/// (or on the table hull for tabulated data).
class Coefficient {
 public:
  using Family = std::variant<ConstantQ, PowerLawQ, SinusoidQ, TabulatedQ>;

  static Coefficient constant(double A);
  /// p < 0 requires domain_start > 0.
  static Coefficient power_law(double C, double p, double domain_start = 0.0);
  static Coefficient sinusoid(double a, double b, double omega);
  static Coefficient tabulated(GridFunction table);

  /// Restricts the domain to [start, ...). Returns a copy.
  Coefficient starting_at(double start) const;
  /// c * q, same family.
  Coefficient scaled(double c) const;

  double operator()(double t) const;
  bool defined_at(double t) const;

  const Family& family() const { return family_; }
  double domain_start() const { return domain_start_; }
  /// Right end of the domain (infinity unless tabulated).
  double domain_end() const;

  std::string describe() const;

 private:
  Coefficient(Family family, double domain_start);

  Family family_;
  double domain_start_;
};

/// C(alpha, beta) = (alpha - beta) Gamma(1 + beta) / Gamma(1 + beta - alpha): the
/// coefficient for which x(t) = t^beta solves the equation with q = C t^(-1-alpha).
double power_solution_coefficient(double alpha, double beta);

}  // namespace fdelab
