#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>

#include "fdelab/averaging.hpp"
#include "fdelab/diagnostics.hpp"
#include "fdelab/error.hpp"
#include "fdelab/fracops.hpp"
#include "fdelab/solver.hpp"
#include "fdelab/specialfn.hpp"

namespace fdelab::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string cell(const GridFunction& f, std::size_t i) { return f.missing(i) ? "nan" : format_number(f[i]); }

// Everything one run needs, plus the report under construction.
struct Job {
  Command command;
  const Scenario& sc;
  MeshPtr mesh;
  fs::path dir;
  Json report;
  RunResult result;

  void write_json() {
    std::ofstream out(dir / "report.json", std::ios::binary);
    out << report.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write report.json");
  }
  void note_artifact(const std::string& name) {
    result.artifacts.push_back(name);
    report["artifacts"].push_back(name);
  }
};

Json mesh_json(const Scenario& sc, const Mesh& m) {
  Json j;
  j["start"] = m.start();
  j["T"] = m.end();
  j["N"] = m.size() - 1;
  j["grading"] = sc.mesh.graded ? "graded" : "uniform";
  if (sc.mesh.graded) j["r"] = sc.mesh.r;
  return j;
}

Json coefficient_json(const Coefficient& q) {
  Json j;
  j["description"] = q.describe();
  j["domain_start"] = q.domain_start();
  return j;
}

std::string reference_name(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::mittag_leffler: return "mittag_leffler";
    case ReferenceKind::power: return "power";
    case ReferenceKind::free: return "q_zero";
    case ReferenceKind::none: return "none";
  }
  return "none";
}

double constant_A(const Scenario& sc) { return std::get<ConstantQ>(sc.q.family()).A; }

// Closed-form x(t) for the scenario; requires reference() != none.
std::function<double(double)> reference_x(const Scenario& sc) {
  const double g = 1.0 + sc.alpha;
  switch (sc.reference()) {
    case ReferenceKind::power: {
      const double beta = *sc.beta;
      return [beta](double t) { return std::pow(t, beta); };
    }
    case ReferenceKind::mittag_leffler: {
      const double A = constant_A(sc);
      const double x0 = sc.x0;
      return [A, x0, g](double t) { return x0 * specialfn::mittag_leffler(g, -A * std::pow(t, g)).value; };
    }
    case ReferenceKind::free:
      if (sc.equation == Equation::curvature) {
        const double slope = sc.y0 / std::sqrt(1.0 - sc.y0 * sc.y0);
        const double start = sc.mesh.start;
        const double x0 = sc.x0;
        return [slope, start, x0](double t) { return x0 + slope * (t - start); };
      } else {
        const double c = sc.y0 / specialfn::gamma(1.0 + sc.alpha);
        const double x0 = sc.x0;
        const double a = sc.alpha;
        return [c, x0, a](double t) { return x0 + c * std::pow(t, a); };
      }
    case ReferenceKind::none: break;
  }
  throw ValidationError(sc.source_file + ": scenario '" + sc.name + "' has no closed-form reference");
}

Json reference_json(const Scenario& sc) {
  Json j;
  j["kind"] = reference_name(sc.reference());
  switch (sc.reference()) {
    case ReferenceKind::power:
      j["formula"] = "t^beta";
      j["beta"] = *sc.beta;
      j["source"] = "closed form";
      break;
    case ReferenceKind::mittag_leffler:
      j["formula"] = "x0 E_{1+alpha}(-A t^{1+alpha})";
      j["source"] = "specialfn::mittag_leffler";
      break;
    case ReferenceKind::free:
      j["formula"] = sc.equation == Equation::curvature ? "x0 + u0 / sqrt(1 - u0^2) (t - start)"
                                                        : "x0 + y0 t^alpha / Gamma(1 + alpha)";
      j["source"] = "closed form";
      break;
    case ReferenceKind::none: break;
  }
  return j;
}

// Sampled closed form dressed as a Solution, with y by the L1 rule.
solver::Solution sampled_solution(const Scenario& sc, const MeshPtr& mesh) {
  const auto xf = reference_x(sc);
  solver::Solution s{mesh, GridFunction::sample(mesh, xf), GridFunction(mesh), GridFunction(mesh), GridFunction(mesh)};
  s.y = fracops::caputo_derivative(s.x, sc.alpha);
  if (sc.reference() == ReferenceKind::power) {
    const double beta = *sc.beta;
    for (std::size_t i = 0; i < mesh->size(); ++i) {
      const double t = (*mesh)[i];
      if (t == 0.0 && beta < 1.0) {
        s.xprime.set_missing(i);
      } else {
        s.xprime[i] = beta * std::pow(t, beta - 1.0);
      }
    }
  } else {
    s.xprime = solver::differentiate(s.x);
  }
  for (std::size_t i = 0; i < mesh->size(); ++i) {
    const double t = (*mesh)[i];
    if (sc.q.defined_at(t)) {
      s.yprime[i] = -sc.q(t) * s.x[i];
    } else {
      s.yprime.set_missing(i);
    }
  }
  return s;
}

solver::Solution trajectory(const Scenario& sc, const MeshPtr& mesh) {
  if (sc.mode == Mode::residual) return sampled_solution(sc, mesh);
  if (sc.equation == Equation::curvature) {
    solver::CurvatureProblem p;
    p.x0 = sc.x0;
    p.u0 = sc.y0;
    p.q = sc.q;
    p.mesh = mesh;
    return solver::solve_curvature(p);
  }
  solver::FdeProblem p;
  p.alpha = sc.alpha;
  p.x0 = sc.x0;
  p.y0 = sc.y0;
  p.q = sc.q;
  p.mesh = mesh;
  return solver::solve_fde(p);
}

std::string trajectory_source(const Scenario& sc) {
  if (sc.mode == Mode::residual) return "closed form sampled; y by fracops::caputo_derivative";
  return sc.equation == Equation::curvature ? "solver::solve_curvature" : "solver::solve_fde";
}

void write_solution(Job& job, const solver::Solution& s) {
  Csv csv(job.dir / "solution.csv", {"t", "x", "y", "xprime", "yprime"});
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    csv.row({format_number((*s.mesh)[i]), cell(s.x, i), cell(s.y, i), cell(s.xprime, i), cell(s.yprime, i)});
  }
  job.note_artifact("solution.csv");
}

Json solution_json(const Job& job, const solver::Solution& s) {
  Json j;
  j["source"] = trajectory_source(job.sc);
  j["nodes"] = s.x.size();
  const std::size_t last = s.x.size() - 1;
  j["x_final"] = number_or_null(s.x[last]);
  j["y_final"] = number_or_null(s.y[last]);
  j["max_abs_x"] = s.x.max_abs();
  j["missing_xprime"] = s.xprime.missing_count();
  if (job.sc.reference() != ReferenceKind::none && job.sc.mode == Mode::solve) {
    const auto xf = reference_x(job.sc);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) worst = std::max(worst, std::abs(s.x[i] - xf((*s.mesh)[i])));
    Json e = reference_json(job.sc);
    e["max_abs_error"] = worst;
    e["source"] = "max over nodes of |x - reference|";
    j["reference"] = e;
  }
  return j;
}

struct ResidualOutcome {
  GridFunction r;
  double from;
  double to;
  double max_abs;
};

ResidualOutcome compute_residual(const Scenario& sc, const GridFunction& x) {
  const double from = sc.residual ? sc.residual->from : sc.q.domain_start();
  const double to = sc.residual ? sc.residual->to : sc.mesh.end;
  ResidualOutcome out{solver::residual_fde(x, sc.q, sc.alpha), from, to, 0.0};
  for (std::size_t i = 0; i < out.r.size(); ++i) {
    const double t = x.mesh()[i];
    if (t < from || t > to || out.r.missing(i)) continue;
    out.max_abs = std::max(out.max_abs, std::abs(out.r[i]));
  }
  return out;
}

Json residual_json(const Scenario& sc, const ResidualOutcome& res) {
  Json j;
  j["source"] = "solver::residual_fde";
  j["window"] = {res.from, res.to};
  j["max_abs"] = res.max_abs;
  if (sc.residual && sc.residual->tol > 0.0) {
    j["tol"] = sc.residual->tol;
    j["within_tol"] = res.max_abs <= sc.residual->tol;
  }
  return j;
}

Json crossings_json(const Scenario& sc, const std::vector<double>& z) {
  Json j;
  j["source"] = "diagnostics::detect_sign_changes (linear-interpolant root)";
  j["count"] = z.size();
  j["times"] = z;
  Json gaps = Json::array();
  for (std::size_t i = 1; i < z.size(); ++i) gaps.push_back(z[i] - z[i - 1]);
  j["gaps"] = gaps;
  const double g = 1.0 + sc.alpha;
  if (sc.equation == Equation::fractional && sc.reference() == ReferenceKind::mittag_leffler && g < 2.0) {
    const double spacing = specialfn::ml_zero_spacing(g, constant_A(sc));
    Json s;
    s["source"] = "specialfn::ml_zero_spacing";
    s["expected"] = spacing;
    const double after = sc.diagnostics.spacing_after.value_or(0.0);
    s["after"] = after;
    double worst = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 1; i < z.size(); ++i) {
      if (z[i - 1] <= after) continue;
      worst = std::max(worst, std::abs((z[i] - z[i - 1]) - spacing) / spacing);
      ++counted;
    }
    s["gaps_compared"] = counted;
    s["max_relative_deviation"] = counted ? Json(worst) : Json(nullptr);
    j["spacing"] = s;
  }
  return j;
}

Json kamenev_json(const Scenario& sc) {
  averaging::KamenevParams p;
  if (sc.kamenev) {
    p = *sc.kamenev;
  } else {
    p.schedule = averaging::KamenevParams::default_schedule();
  }
  const auto v = averaging::classify_kamenev(sc.q, p);
  Json j;
  j["source"] = "averaging::classify_kamenev";
  j["epsilon"] = p.epsilon;
  j["t0"] = p.t0;
  Json values = Json::array();
  for (const auto& [t, k] : v.values) values.push_back({{"t", t}, {"K", k}, {"source", "averaging::kamenev_average"}});
  j["values"] = values;
  j["verdict"] = averaging::to_string(v.verdict);
  j["rule"] = v.rule;
  j["growth_fit"] = {{"slope", v.slope}, {"intercept", v.intercept}, {"relative_residual", v.fit_residual}};
  j["flatness_ratio"] = number_or_null(v.flatness_ratio);
  j["increment_decay"] = v.increment_decay ? Json(*v.increment_decay) : Json(nullptr);
  j["thresholds"] = {{"fit_residual_max", averaging::kFitResidualMax},
                     {"flatness_band", averaging::kFlatnessBand},
                     {"summable_decay", averaging::kSummableDecay}};
  j["epsilon_warning"] = v.epsilon_warning;
  j["evidence_only"] = true;
  return j;
}

Json integral_json(const averaging::IntegralValue& v) {
  return v.diverges ? Json("diverges") : Json(v.value);
}

Json conditions_json(const Scenario& sc) {
  const auto rep = averaging::check_integrability_conditions(sc.q, sc.alpha, sc.tail_horizon);
  Json j;
  j["source"] = "averaging::check_integrability_conditions";
  j["alpha"] = sc.alpha;
  j["tail_horizon"] = sc.tail_horizon;
  j["I1"] = integral_json(rep.weighted_first);
  j["I2"] = integral_json(rep.weighted_second);
  j["gamma_bound"] = rep.gamma_bound;
  j["passes"] = averaging::to_string(rep.passes);
  j["analytic"] = rep.analytic;
  j["note"] = rep.note;
  return j;
}

// Linear interpolation of w at T from the two bracketing unmasked nodes.
double w_at(const GridFunction& w, double T) {
  const Mesh& m = w.mesh();
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    if (m[i] <= T && T <= m[i + 1]) {
      if (w.missing(i) || w.missing(i + 1)) break;
      const double s = (T - m[i]) / (m[i + 1] - m[i]);
      return (1.0 - s) * w[i] + s * w[i + 1];
    }
  }
  throw EmptyResultError("bound_check: w is masked at T = " + format_number(T));
}

void diagnose(Job& job) {
  const Scenario& sc = job.sc;
  const auto s = trajectory(sc, job.mesh);
  write_solution(job, s);
  job.report["solution"] = solution_json(job, s);

  const GridFunction S = diagnostics::sign_quantity(s);
  const auto ric = diagnostics::riccati_residual(s, sc.q, sc.diagnostics.mask);
  {
    Csv csv(job.dir / "diagnostics.csv", {"t", "w", "residual", "S"});
    for (std::size_t i = 0; i < S.size(); ++i) {
      csv.row({format_number((*job.mesh)[i]), cell(ric.w, i), cell(ric.residual, i), cell(S, i)});
    }
    job.note_artifact("diagnostics.csv");
  }

  const auto z = diagnostics::detect_sign_changes(s.x);
  job.report["x_zero_crossings"] = crossings_json(sc, z);

  Json sj;
  sj["source"] = "diagnostics::sign_quantity";
  sj["definition"] = sc.equation == Equation::curvature ? "Dx (x' - Dx)" : "x^(alpha) (x' - x^(alpha))";
  double smin = std::numeric_limits<double>::infinity();
  std::size_t negative = 0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (S.missing(i)) continue;
    smin = std::min(smin, S[i]);
    if (S[i] < 0.0) ++negative;
  }
  sj["min"] = number_or_null(smin);
  sj["negative_nodes"] = negative;
  sj["missing_nodes"] = S.missing_count();
  sj["S_negative_times"] = diagnostics::negative_entries(S);
  sj["S_negative_times_source"] = "diagnostics::negative_entries";
  job.report["sign_quantity"] = sj;

  Json rj;
  rj["source"] = "diagnostics::riccati_residual";
  rj["mask_relative"] = sc.diagnostics.mask;
  rj["threshold"] = ric.threshold;
  rj["masked_nodes"] = ric.masked;
  rj["max_consistency_gap"] = ric.max_consistency_gap;
  rj["notes"] = ric.notes;
  job.report["riccati"] = rj;

  if (sc.diagnostics.bound_check) {
    const auto& b = *sc.diagnostics.bound_check;
    const double wT = w_at(ric.w, b.T);
    Json arr = Json::array();
    for (double t : b.t) {
      const auto chk = diagnostics::kamenev_bound_check(wT, sc.q, b.epsilon, b.T, t);
      arr.push_back({{"t", t}, {"lhs", chk.lhs}, {"rhs", chk.rhs}, {"holds", chk.holds}});
    }
    Json bj;
    bj["source"] = "diagnostics::kamenev_bound_check";
    bj["epsilon"] = b.epsilon;
    bj["T"] = b.T;
    bj["w_T"] = wT;
    bj["w_T_source"] = "riccati w interpolated at T";
    bj["checks"] = arr;
    job.report["bound_check"] = bj;
  }

  if (sc.equation == Equation::fractional) {
    const auto L = diagnostics::limit_estimate_xalpha(s, sc.diagnostics.limit_window);
    job.report["limit_xalpha"] = {{"source", "diagnostics::limit_estimate_xalpha"},
                                  {"window_fraction", sc.diagnostics.limit_window},
                                  {"mean", L.mean},
                                  {"slope", L.slope},
                                  {"nodes", L.nodes}};
    job.report["residual"] = residual_json(sc, compute_residual(sc, s.x));
    job.report["conditions"] = conditions_json(sc);
  }
  if (sc.kamenev) job.report["kamenev"] = kamenev_json(sc);

  std::ostringstream os;
  os << z.size() << " x-crossing(s), " << ric.masked << " masked node(s)";
  if (job.report.contains("kamenev")) os << ", Kamenev " << job.report["kamenev"]["verdict"].get<std::string>();
  job.result.summary = os.str();
}

void converge(Job& job) {
  const Scenario& sc = job.sc;
  if (sc.reference() == ReferenceKind::none) {
    throw ValidationError(sc.source_file + ": converge needs a closed-form reference (q = 0, constant q with y0 = 0, "
                                           "or residual mode)");
  }
  std::vector<std::size_t> ns = sc.convergence;
  if (ns.empty()) ns = {sc.mesh.intervals, 2 * sc.mesh.intervals, 4 * sc.mesh.intervals};
  const auto xf = reference_x(sc);

  std::vector<double> errs;
  std::vector<double> scales;
  for (std::size_t n : ns) {
    const MeshPtr mesh = sc.mesh.build(n);
    if (sc.mode == Mode::residual) {
      const auto x = GridFunction::sample(mesh, xf);
      errs.push_back(compute_residual(sc, x).max_abs);
      scales.push_back(0.0);
    } else {
      const auto s = trajectory(sc, mesh);
      double worst = 0.0;
      double scale = 0.0;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double ref = xf((*mesh)[i]);
        worst = std::max(worst, std::abs(s.x[i] - ref));
        scale = std::max(scale, std::abs(ref));
      }
      errs.push_back(worst);
      scales.push_back(scale);
    }
  }

  // errors at rounding level carry no order information
  auto at_rounding = [&](std::size_t i) { return errs[i] <= 64.0 * std::numeric_limits<double>::epsilon() * scales[i]; };
  Csv csv(job.dir / "convergence.csv", {"N", "error", "order"});
  Json rows = Json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::string order = "n/a";
    Json jorder = nullptr;
    if (i > 0) {
      monotone = monotone && errs[i] < errs[i - 1];
      if (!at_rounding(i) && !at_rounding(i - 1) && errs[i] > 0.0) {
        const double o = std::log(errs[i - 1] / errs[i]) / std::log(static_cast<double>(ns[i]) / ns[i - 1]);
        order = format_number(o);
        jorder = o;
      }
    }
    csv.row({std::to_string(ns[i]), format_number(errs[i]), order});
    rows.push_back({{"N", ns[i]}, {"error", errs[i]}, {"order", jorder}});
  }
  job.note_artifact("convergence.csv");
  Json j;
  j["source"] = sc.mode == Mode::residual ? "max |solver::residual_fde| over the residual window"
                                          : "max over nodes of |x - reference|, x from " + trajectory_source(sc);
  j["reference"] = reference_json(sc);
  j["rows"] = rows;
  j["monotone"] = monotone;
  j["order_definition"] = "log(err_prev / err) / log(N / N_prev)";
  job.report["convergence"] = j;
  job.result.summary = "errors " + format_number(errs.front()) + " -> " + format_number(errs.back());
}

void execute(Job& job) {
  const Scenario& sc = job.sc;
  switch (job.command) {
    case Command::solve: {
      const auto s = trajectory(sc, job.mesh);
      write_solution(job, s);
      job.report["solution"] = solution_json(job, s);
      job.result.summary = "x(T) = " + format_number(s.x[s.x.size() - 1]);
      break;
    }
    case Command::residual: {
      if (sc.equation != Equation::fractional) throw ValidationError(sc.source_file + ": residual needs the fractional equation");
      const GridFunction x = sc.mode == Mode::residual ? GridFunction::sample(job.mesh, reference_x(sc))
                                                       : trajectory(sc, job.mesh).x;
      const auto res = compute_residual(sc, x);
      Csv csv(job.dir / "residual.csv", {"t", "x", "residual"});
      for (std::size_t i = 0; i < x.size(); ++i) csv.row({format_number((*job.mesh)[i]), cell(x, i), cell(res.r, i)});
      job.note_artifact("residual.csv");
      job.report["residual"] = residual_json(sc, res);
      job.result.summary = "max |r| = " + format_number(res.max_abs);
      if (sc.residual && sc.residual->tol > 0.0 && res.max_abs > sc.residual->tol) job.result.summary += " (above tol)";
      break;
    }
    case Command::kamenev:
      job.report["kamenev"] = kamenev_json(sc);
      job.result.summary = "Kamenev " + job.report["kamenev"]["verdict"].get<std::string>();
      break;
    case Command::conditions:
      if (sc.equation != Equation::fractional) throw ValidationError(sc.source_file + ": conditions needs alpha (fractional equation)");
      job.report["conditions"] = conditions_json(sc);
      job.result.summary = "conditions pass: " + job.report["conditions"]["passes"].get<std::string>();
      break;
    case Command::zeros: {
      const auto s = trajectory(sc, job.mesh);
      const auto z = diagnostics::detect_sign_changes(s.x);
      Csv csv(job.dir / "zeros.csv", {"index", "t"});
      for (std::size_t i = 0; i < z.size(); ++i) csv.row({std::to_string(i), format_number(z[i])});
      job.note_artifact("zeros.csv");
      job.report["x_zero_crossings"] = crossings_json(sc, z);
      job.result.summary = std::to_string(z.size()) + " x-crossing(s)";
      break;
    }
    case Command::diagnose: diagnose(job); break;
    case Command::converge: converge(job); break;
  }
}

Json scenario_json(const Scenario& sc) {
  Json j;
  j["name"] = sc.name;
  j["config"] = sc.source_file;
  j["equation"] = sc.equation == Equation::fractional ? "fractional" : "curvature";
  j["mode"] = sc.mode == Mode::solve ? "solve" : "residual";
  if (sc.equation == Equation::fractional) {
    j["alpha"] = sc.alpha;
    j["x0"] = sc.x0;
    j["y0"] = sc.y0;
  } else {
    j["x0"] = sc.x0;
    j["u0"] = sc.y0;
  }
  if (sc.beta) j["beta"] = *sc.beta;
  j["q"] = coefficient_json(sc.q);
  return j;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::solve, Command::residual, Command::kamenev, Command::conditions, Command::diagnose,
                    Command::converge, Command::zeros}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::residual: return "residual";
    case Command::kamenev: return "kamenev";
    case Command::conditions: return "conditions";
    case Command::diagnose: return "diagnose";
    case Command::converge: return "converge";
    case Command::zeros: return "zeros";
  }
  return "solve";
}

RunResult run(Command command, const Scenario& scenario, const RunOptions& options) {
  Job job{command, scenario, nullptr, options.out.value_or(scenario.output_dir), Json::object(), {}};
  job.result.out_dir = job.dir.string();

  auto fail = [&](int code, const std::string& kind, const std::string& what, std::optional<std::size_t> last_good) {
    job.result.exit_code = code;
    job.result.summary = kind + ": " + what;
    job.report["status"] = kind;
    job.report["error"] = what;
    if (last_good) job.report["last_good_index"] = *last_good;
    job.report["partial"] = !job.result.artifacts.empty();
    try {
      if (fs::is_directory(job.dir)) job.write_json();
    } catch (const std::exception&) {
    }
    return job.result;
  };

  try {
    job.mesh = options.n ? scenario.mesh.build(*options.n) : scenario.mesh.build();
  } catch (const fdelab::Error& e) {
    return fail(kExitValidation, "validation_error", e.what(), std::nullopt);
  }

  Json meta;
  meta["tool"] = "fdelab";
  meta["version"] = kVersion;
  meta["command"] = to_string(command);
  meta["timestamp"] = utc_timestamp();
  meta["mesh"] = mesh_json(scenario, *job.mesh);
  meta["tolerances"] = {{"ml_z_switch", specialfn::MlOptions{}.z_switch},
                        {"ml_max_terms", specialfn::MlOptions{}.max_terms},
                        {"riccati_mask_relative", scenario.diagnostics.mask},
                        {"kamenev_quadrature_relative", 1e-10},
                        {"bound_check_slack", 1e-9},
                        {"csv_significant_digits", 17}};
  job.report["metadata"] = meta;
  job.report["scenario"] = scenario_json(scenario);
  job.report["status"] = "ok";
  job.report["artifacts"] = Json::array();

  try {
    fs::create_directories(job.dir);
  } catch (const fs::filesystem_error& e) {
    return fail(kExitValidation, "validation_error", std::string("cannot create output directory: ") + e.what(),
                std::nullopt);
  }

  try {
    execute(job);
    job.report["status"] = "ok";
    job.report["partial"] = false;
    job.write_json();
  } catch (const ValidationError& e) {
    return fail(kExitValidation, "validation_error", e.what(), std::nullopt);
  } catch (const DivergenceError& e) {
    return fail(kExitNumerical, "numerical_failure", e.what(), e.last_good_index());
  } catch (const AccuracyLossError& e) {
    return fail(kExitNumerical, "numerical_failure", e.what(), std::nullopt);
  } catch (const EmptyResultError& e) {
    return fail(kExitNumerical, "numerical_failure", e.what(), std::nullopt);
  } catch (const DomainError& e) {
    return fail(kExitValidation, "validation_error", e.what(), std::nullopt);
  } catch (const SizeError& e) {
    return fail(kExitValidation, "validation_error", e.what(), std::nullopt);
  } catch (const std::exception& e) {
    return fail(kExitNumerical, "numerical_failure", e.what(), std::nullopt);
  }
  job.result.artifacts.push_back("report.json");
  return job.result;
}

RunResult run_file(Command command, const std::string& config, const RunOptions& options) {
  try {
    const Scenario sc = load_scenario(config);
    return run(command, sc, options);
  } catch (const ValidationError& e) {
    RunResult r;
    r.exit_code = kExitValidation;
    r.summary = std::string("validation_error: ") + e.what();
    return r;
  }
}

}  // namespace fdelab::cli
