#include "scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fdelab/error.hpp"

namespace fdelab::cli {

namespace {

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    std::ostringstream os;
    os << origin_;
    const YAML::Mark m = at.Mark();
    if (m.line >= 0) os << ':' << m.line + 1 << ':' << m.column + 1;
    os << ": " << what;
    throw ValidationError(os.str());
  }

  void only(const YAML::Node& map, const std::set<std::string>& keys, const std::string& where) const {
    if (!map.IsMap()) fail(map, where + " must be a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!keys.contains(key)) fail(kv.first, "unknown key '" + key + "' in " + where);
    }
  }

  double number(const YAML::Node& node, const std::string& key) const {
    try {
      const double v = node.as<double>();
      if (!std::isfinite(v)) fail(node, key + " must be finite");
      return v;
    } catch (const YAML::BadConversion&) {
      fail(node, key + " must be a number");
    }
  }

  double number(const YAML::Node& map, const std::string& key, double fallback) const {
    const YAML::Node n = map[key];
    return n ? number(n, key) : fallback;
  }

  std::size_t count(const YAML::Node& node, const std::string& key) const {
    try {
      const long long v = node.as<long long>();
      if (v <= 0) fail(node, key + " must be a positive integer");
      return static_cast<std::size_t>(v);
    } catch (const YAML::BadConversion&) {
      fail(node, key + " must be a positive integer");
    }
  }

  std::string text(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, key + " must be a string");
    return node.as<std::string>();
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& key) const {
    if (!node.IsSequence()) fail(node, key + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& v : node) out.push_back(number(v, key));
    return out;
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

Coefficient read_q(const Reader& rd, const YAML::Node& node, double alpha) {
  if (!node) return Coefficient::constant(0.0);
  if (!node.IsMap() || !node["family"]) rd.fail(node, "q needs a 'family'");
  const std::string family = rd.text(node["family"], "q.family");
  try {
    if (family == "constant") {
      rd.only(node, {"family", "A"}, "q");
      return Coefficient::constant(rd.number(node, "A", 0.0));
    }
    if (family == "power_law") {
      rd.only(node, {"family", "C", "p", "beta", "domain_start"}, "q");
      const double start = rd.number(node, "domain_start", 0.0);
      if (node["beta"]) {
        // C(alpha, beta) t^(-1-alpha): the coefficient with solution t^beta
        if (node["C"] || node["p"]) rd.fail(node["beta"], "q: give either beta or C and p");
        const double beta = rd.number(node["beta"], "q.beta");
        return Coefficient::power_law(power_solution_coefficient(alpha, beta), -1.0 - alpha, start);
      }
      if (!node["C"] || !node["p"]) rd.fail(node, "power_law q needs C and p (or beta)");
      return Coefficient::power_law(rd.number(node["C"], "q.C"), rd.number(node["p"], "q.p"), start);
    }
    if (family == "sinusoid") {
      rd.only(node, {"family", "a", "b", "omega"}, "q");
      return Coefficient::sinusoid(rd.number(node, "a", 0.0), rd.number(node, "b", 0.0), rd.number(node, "omega", 1.0));
    }
    if (family == "tabulated") {
      rd.only(node, {"family", "t", "values"}, "q");
      if (!node["t"] || !node["values"]) rd.fail(node, "tabulated q needs 't' and 'values'");
      const auto t = rd.numbers(node["t"], "q.t");
      const auto v = rd.numbers(node["values"], "q.values");
      if (t.empty()) rd.fail(node["t"], "tabulated q: table is empty");
      if (t.size() != v.size()) rd.fail(node["values"], "tabulated q: 't' and 'values' differ in length");
      if (t.size() < 3) rd.fail(node["t"], "tabulated q: need at least 3 samples");
      GridFunction table(Mesh::from_nodes(t), v);
      return Coefficient::tabulated(std::move(table));
    }
  } catch (const fdelab::Error& e) {
    rd.fail(node, std::string("q: ") + e.what());
  }
  rd.fail(node["family"], "unknown q family '" + family + "' (constant, power_law, sinusoid, tabulated)");
}

}  // namespace

MeshPtr MeshSpec::build() const { return build(intervals); }

MeshPtr MeshSpec::build(std::size_t n) const {
  return graded ? Mesh::graded(end, n, r) : Mesh::uniform(start, end, n);
}

ReferenceKind Scenario::reference() const {
  if (mode == Mode::residual) return beta ? ReferenceKind::power : ReferenceKind::mittag_leffler;
  const auto* c = std::get_if<ConstantQ>(&q.family());
  if (!c) return ReferenceKind::none;
  if (c->A == 0.0) return ReferenceKind::free;
  if (equation == Equation::fractional && y0 == 0.0) return ReferenceKind::mittag_leffler;
  return ReferenceKind::none;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  const Reader rd(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << origin << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw ValidationError(os.str());
  }
  if (!root || !root.IsMap()) throw ValidationError(origin + ": config must be a YAML mapping");
  rd.only(root, {"name", "equation", "mode", "alpha", "x0", "y0", "u0", "beta", "q", "mesh", "kamenev", "conditions",
                 "diagnostics", "residual", "convergence", "output_dir"},
          "scenario");

  Scenario sc;
  sc.source_file = origin;
  if (!root["name"]) rd.fail(root, "missing 'name'");
  sc.name = rd.text(root["name"], "name");
  if (sc.name.empty() || sc.name.find('/') != std::string::npos) rd.fail(root["name"], "name must be a plain word");

  if (root["equation"]) {
    const auto eq = rd.text(root["equation"], "equation");
    if (eq == "fractional") {
      sc.equation = Equation::fractional;
    } else if (eq == "curvature") {
      sc.equation = Equation::curvature;
    } else {
      rd.fail(root["equation"], "equation must be 'fractional' or 'curvature'");
    }
  }
  if (root["mode"]) {
    const auto m = rd.text(root["mode"], "mode");
    if (m == "solve") {
      sc.mode = Mode::solve;
    } else if (m == "residual") {
      sc.mode = Mode::residual;
    } else {
      rd.fail(root["mode"], "mode must be 'solve' or 'residual'");
    }
  }
  const bool curvature = sc.equation == Equation::curvature;
  if (curvature && sc.mode == Mode::residual) rd.fail(root["mode"], "residual mode applies to the fractional equation");

  if (root["alpha"]) {
    if (curvature) rd.fail(root["alpha"], "alpha does not apply to the curvature equation");
    sc.alpha = rd.number(root["alpha"], "alpha");
  }
  if (!(sc.alpha > 0.0 && sc.alpha < 1.0)) rd.fail(root["alpha"], "alpha must lie in (0, 1)");
  sc.x0 = rd.number(root, "x0", 1.0);
  if (curvature) {
    if (root["y0"]) rd.fail(root["y0"], "the curvature equation takes u0, not y0");
    sc.y0 = rd.number(root, "u0", 0.0);
    if (!(std::abs(sc.y0) < 1.0)) rd.fail(root["u0"], "u0 must satisfy |u0| < 1");
  } else {
    if (root["u0"]) rd.fail(root["u0"], "u0 applies to the curvature equation; use y0");
    sc.y0 = rd.number(root, "y0", 0.0);
  }
  if (root["beta"]) {
    if (sc.mode != Mode::residual) rd.fail(root["beta"], "beta (sampled t^beta) applies to residual mode");
    sc.beta = rd.number(root["beta"], "beta");
    if (!(*sc.beta > 0.0)) rd.fail(root["beta"], "beta must be > 0");
  }
  sc.q = read_q(rd, root["q"], sc.alpha);

  const YAML::Node mesh = root["mesh"];
  if (!mesh) rd.fail(root, "missing 'mesh'");
  rd.only(mesh, {"start", "T", "N", "grading", "r"}, "mesh");
  sc.mesh.start = rd.number(mesh, "start", 0.0);
  if (!mesh["T"]) rd.fail(mesh, "mesh needs T");
  sc.mesh.end = rd.number(mesh["T"], "mesh.T");
  if (!mesh["N"]) rd.fail(mesh, "mesh needs N");
  sc.mesh.intervals = rd.count(mesh["N"], "mesh.N");
  if (sc.mesh.intervals < 2) rd.fail(mesh["N"], "mesh.N must be >= 2");
  if (mesh["grading"]) {
    const auto g = rd.text(mesh["grading"], "mesh.grading");
    if (g == "graded") {
      sc.mesh.graded = true;
    } else if (g != "uniform") {
      rd.fail(mesh["grading"], "mesh.grading must be 'uniform' or 'graded'");
    }
  }
  sc.mesh.r = rd.number(mesh, "r", 2.0);
  if (!(sc.mesh.r >= 1.0)) rd.fail(mesh["r"], "mesh.r must be >= 1");
  if (!(sc.mesh.start >= 0.0 && sc.mesh.end > sc.mesh.start)) rd.fail(mesh, "mesh needs 0 <= start < T");
  if (sc.mesh.graded && sc.mesh.start != 0.0) rd.fail(mesh["start"], "graded meshes start at 0");
  if (!curvature && sc.mesh.start != 0.0) rd.fail(mesh["start"], "the fractional equation needs a mesh starting at 0");

  if (!curvature && sc.mode == Mode::solve && sc.q.domain_start() > 0.0) {
    rd.fail(root["q"], "q is not defined at t = 0; solve needs q on [0, T]. Use mode: residual for this q");
  }
  if (curvature && !sc.q.defined_at(sc.mesh.start)) rd.fail(root["q"], "q is not defined at mesh.start");
  if (!sc.q.defined_at(sc.mesh.end)) rd.fail(root["q"], "q is not defined at mesh.T");
  if (sc.mode == Mode::residual && !sc.beta && !std::holds_alternative<ConstantQ>(sc.q.family())) {
    rd.fail(root, "residual mode samples t^beta (give beta) or the Mittag-Leffler solution (constant q)");
  }

  if (const YAML::Node k = root["kamenev"]) {
    rd.only(k, {"epsilon", "t0", "schedule"}, "kamenev");
    averaging::KamenevParams p;
    p.epsilon = rd.number(k, "epsilon", 3.0);
    p.t0 = rd.number(k, "t0", 1.0);
    p.schedule = k["schedule"] ? rd.numbers(k["schedule"], "kamenev.schedule") : averaging::KamenevParams::default_schedule();
    try {
      (void)p.validate();
    } catch (const fdelab::Error& e) {
      rd.fail(k, std::string("kamenev: ") + e.what());
    }
    if (!sc.q.defined_at(p.t0) || !sc.q.defined_at(p.schedule.back())) rd.fail(k, "kamenev: q is not defined on [t0, last schedule time]");
    sc.kamenev = p;
  }

  if (const YAML::Node c = root["conditions"]) {
    rd.only(c, {"tail_horizon"}, "conditions");
    sc.tail_horizon = rd.number(c, "tail_horizon", sc.tail_horizon);
    if (!(sc.tail_horizon > 0.0)) rd.fail(c["tail_horizon"], "tail_horizon must be > 0");
  }

  if (const YAML::Node d = root["diagnostics"]) {
    rd.only(d, {"mask", "limit_window", "spacing_after", "bound_check"}, "diagnostics");
    sc.diagnostics.mask = rd.number(d, "mask", sc.diagnostics.mask);
    if (!(sc.diagnostics.mask > 0.0)) rd.fail(d["mask"], "diagnostics.mask must be > 0");
    sc.diagnostics.limit_window = rd.number(d, "limit_window", sc.diagnostics.limit_window);
    const double lw = sc.diagnostics.limit_window;
    if (!(lw > 0.0 && lw < 1.0)) rd.fail(d["limit_window"], "diagnostics.limit_window must lie in (0, 1)");
    if (d["spacing_after"]) sc.diagnostics.spacing_after = rd.number(d["spacing_after"], "diagnostics.spacing_after");
    if (const YAML::Node b = d["bound_check"]) {
      rd.only(b, {"epsilon", "T", "t"}, "diagnostics.bound_check");
      BoundCheckSpec spec;
      spec.epsilon = rd.number(b, "epsilon", 3.0);
      spec.T = rd.number(b, "T", 1.0);
      if (!b["t"]) rd.fail(b, "bound_check needs a list t");
      spec.t = rd.numbers(b["t"], "bound_check.t");
      if (!(spec.epsilon > 1.0)) rd.fail(b["epsilon"], "bound_check.epsilon must be > 1");
      if (!(spec.T >= sc.mesh.start && spec.T < sc.mesh.end)) rd.fail(b["T"], "bound_check.T must lie in the mesh");
      for (double t : spec.t) {
        if (!(t > spec.T)) rd.fail(b["t"], "bound_check times must exceed T");
      }
      sc.diagnostics.bound_check = spec;
    }
  }

  if (const YAML::Node r = root["residual"]) {
    rd.only(r, {"from", "to", "tol"}, "residual");
    ResidualSpec spec;
    spec.from = rd.number(r, "from", sc.mesh.start);
    spec.to = rd.number(r, "to", sc.mesh.end);
    spec.tol = rd.number(r, "tol", 0.0);
    if (!(spec.to > spec.from)) rd.fail(r, "residual window needs from < to");
    if (sc.equation != Equation::fractional) rd.fail(r, "residual applies to the fractional equation");
    sc.residual = spec;
  }

  if (const YAML::Node c = root["convergence"]) {
    rd.only(c, {"N"}, "convergence");
    if (!c["N"] || !c["N"].IsSequence()) rd.fail(c, "convergence needs a list N");
    for (const auto& n : c["N"]) sc.convergence.push_back(rd.count(n, "convergence.N"));
    if (sc.convergence.size() < 2) rd.fail(c["N"], "convergence needs at least two N");
    for (std::size_t i = 1; i < sc.convergence.size(); ++i) {
      if (sc.convergence[i] <= sc.convergence[i - 1]) rd.fail(c["N"], "convergence N must increase");
    }
  }

  sc.output_dir = root["output_dir"] ? rd.text(root["output_dir"], "output_dir") : "out/" + sc.name;
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot read config");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

}  // namespace fdelab::cli
