#include "fdelab/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fdelab/error.hpp"
#include "fdelab/specialfn.hpp"

namespace fdelab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Coefficient::Coefficient(Family family, double domain_start) : family_(std::move(family)), domain_start_(domain_start) {
  if (!(domain_start_ >= 0.0) || !std::isfinite(domain_start_)) {
    throw DomainError("coefficient domain_start must be finite and >= 0");
  }
  if (const auto* pl = std::get_if<PowerLawQ>(&family_); pl && pl->p < 0.0 && domain_start_ <= 0.0) {
    throw DomainError("power_law q with negative exponent is singular at 0: declare domain_start > 0");
  }
}

Coefficient Coefficient::constant(double A) { return Coefficient(ConstantQ{A}, 0.0); }

Coefficient Coefficient::power_law(double C, double p, double domain_start) {
  return Coefficient(PowerLawQ{C, p}, domain_start);
}

Coefficient Coefficient::sinusoid(double a, double b, double omega) { return Coefficient(SinusoidQ{a, b, omega}, 0.0); }

Coefficient Coefficient::tabulated(GridFunction table) {
  if (table.size() < 2) throw SizeError("tabulated q needs at least 2 samples");
  if (table.missing_count() != 0) throw DomainError("tabulated q has missing samples");
  const double start = table.mesh().start();
  return Coefficient(TabulatedQ{std::move(table)}, start);
}

Coefficient Coefficient::starting_at(double start) const {
  if (const auto* tab = std::get_if<TabulatedQ>(&family_); tab && start < tab->table.mesh().start()) {
    throw DomainError("tabulated q cannot start before its table");
  }
  return Coefficient(family_, start);
}

Coefficient Coefficient::scaled(double c) const {
  Family f = std::visit(Overloaded{
                            [c](const ConstantQ& q) -> Family { return ConstantQ{c * q.A}; },
                            [c](const PowerLawQ& q) -> Family { return PowerLawQ{c * q.C, q.p}; },
                            [c](const SinusoidQ& q) -> Family { return SinusoidQ{c * q.a, c * q.b, q.omega}; },
                            [c](const TabulatedQ& q) -> Family {
                              std::vector<double> v(q.table.values().begin(), q.table.values().end());
                              for (double& x : v) x *= c;
                              return TabulatedQ{GridFunction(q.table.mesh_ptr(), std::move(v))};
                            },
                        },
                        family_);
  return Coefficient(std::move(f), domain_start_);
}

double Coefficient::domain_end() const {
  if (const auto* tab = std::get_if<TabulatedQ>(&family_)) return tab->table.mesh().end();
  return std::numeric_limits<double>::infinity();
}

bool Coefficient::defined_at(double t) const { return t >= domain_start_ && t <= domain_end(); }

double Coefficient::operator()(double t) const {
  if (!defined_at(t)) {
    std::ostringstream os;
    os.precision(17);
    os << "q is not defined at t = " << t << " (domain [" << domain_start_ << ", " << domain_end() << "])";
    throw DomainError(os.str());
  }
  return std::visit(Overloaded{
                        [](const ConstantQ& q) { return q.A; },
                        [t](const PowerLawQ& q) { return q.C * std::pow(t, q.p); },
                        [t](const SinusoidQ& q) { return q.a * std::sin(q.omega * t) + q.b; },
                        [t](const TabulatedQ& q) {
                          const auto nodes = q.table.mesh().nodes();
                          auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
                          std::size_t i = static_cast<std::size_t>(it - nodes.begin());
                          if (i >= nodes.size()) return q.table[nodes.size() - 1];
                          if (i == 0) return q.table[0];
                          const double t0 = nodes[i - 1];
                          const double t1 = nodes[i];
                          const double s = (t - t0) / (t1 - t0);
                          return (1.0 - s) * q.table[i - 1] + s * q.table[i];
                        },
                    },
                    family_);
}

std::string Coefficient::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const ConstantQ& q) { os << "constant(A=" << q.A << ")"; },
                 [&](const PowerLawQ& q) { os << "power_law(C=" << q.C << ", p=" << q.p << ")"; },
                 [&](const SinusoidQ& q) { os << "sinusoid(a=" << q.a << ", b=" << q.b << ", omega=" << q.omega << ")"; },
                 [&](const TabulatedQ& q) { os << "tabulated(" << q.table.size() << " samples)"; },
             },
             family_);
  if (domain_start_ > 0.0 && !std::holds_alternative<TabulatedQ>(family_)) os << " on [" << domain_start_ << ", inf)";
  return os.str();
}

double power_solution_coefficient(double alpha, double beta) {
  return (alpha - beta) * specialfn::gamma(1.0 + beta) / specialfn::gamma(1.0 + beta - alpha);
}

}  // namespace fdelab
