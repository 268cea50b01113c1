#include "gapcert/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Vec vec_from_json(const Json& j) {
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

Json vec_to_json(const Vec& v) {
  Json j = Json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

double finite_or(const Json& j, double inf_value) {
  if (j.is_null()) return inf_value;
  return j.get<double>();
}

Json bound_to_json(double b) {
  if (std::isinf(b)) return nullptr;
  return b;
}
}  // namespace

Json poly_to_json(const Poly& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms()) {
    Json e = Json::array();
    for (int x : t.exps) e.push_back(x);
    terms.push_back(Json{{"c", t.coef}, {"e", e}});
  }
  return Json{{"vars", p.nvars()}, {"terms", terms}};
}

Poly poly_from_json(const Json& j) {
  Poly p(j.at("vars").get<int>());
  for (const auto& t : j.at("terms")) {
    std::vector<int> e;
    for (const auto& x : t.at("e")) e.push_back(x.get<int>());
    p.add_term(t.at("c").get<double>(), std::move(e));
  }
  return p;
}

Json set_to_json(const SetSpec& s) {
  Json j;
  switch (s.kind) {
    case SetSpec::Kind::box: {
      j["type"] = "box";
      Json lo = Json::array(), hi = Json::array();
      for (int i = 0; i < s.dim; ++i) {
        lo.push_back(bound_to_json(s.lower[i]));
        hi.push_back(bound_to_json(s.upper[i]));
      }
      j["lower"] = lo;
      j["upper"] = hi;
      break;
    }
    case SetSpec::Kind::ball:
      j["type"] = "ball";
      j["center"] = vec_to_json(s.center);
      j["radius"] = s.radius;
      break;
    case SetSpec::Kind::half_space:
      j["type"] = "half-space";
      j["normal"] = vec_to_json(s.normal);
      j["offset"] = s.offset;
      break;
    case SetSpec::Kind::singleton:
      j["type"] = "singleton";
      j["point"] = vec_to_json(s.point);
      break;
    case SetSpec::Kind::polyhedron: {
      j["type"] = "polyhedron";
      Json rows = Json::array();
      for (int i = 0; i < s.Ain.rows(); ++i) rows.push_back(vec_to_json(s.Ain.row(i).transpose()));
      j["a"] = rows;
      j["b"] = vec_to_json(s.bin);
      break;
    }
    case SetSpec::Kind::product: {
      j["type"] = "product";
      Json f = Json::array();
      for (const auto& x : s.factors) f.push_back(set_to_json(x));
      j["factors"] = f;
      break;
    }
    case SetSpec::Kind::intersection: {
      j["type"] = "intersection";
      Json f = Json::array();
      for (const auto& x : s.factors) f.push_back(set_to_json(x));
      j["factors"] = f;
      j["transversal"] = s.transversal;
      break;
    }
  }
  return j;
}

SetSpec set_from_json(const Json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "box") {
    const Json& lo = j.at("lower");
    const Json& hi = j.at("upper");
    Vec l(lo.size()), u(hi.size());
    for (size_t i = 0; i < lo.size(); ++i) l[static_cast<int>(i)] = finite_or(lo[i], -kInf);
    for (size_t i = 0; i < hi.size(); ++i) u[static_cast<int>(i)] = finite_or(hi[i], kInf);
    return SetSpec::make_box(l, u);
  }
  if (type == "ball")
    return SetSpec::make_ball(vec_from_json(j.at("center")), j.at("radius").get<double>());
  if (type == "half-space")
    return SetSpec::make_half_space(vec_from_json(j.at("normal")), j.at("offset").get<double>());
  if (type == "singleton") return SetSpec::make_singleton(vec_from_json(j.at("point")));
  if (type == "polyhedron") {
    const Json& rows = j.at("a");
    Vec b = vec_from_json(j.at("b"));
    Mat A(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) A.row(i) = vec_from_json(rows[i]).transpose();
    return SetSpec::make_polyhedron(A, b);
  }
  if (type == "product" || type == "intersection") {
    std::vector<SetSpec> factors;
    for (const auto& f : j.at("factors")) factors.push_back(set_from_json(f));
    if (type == "product") return SetSpec::make_product(std::move(factors));
    return SetSpec::make_intersection(std::move(factors), j.value("transversal", false));
  }
  throw Error(ErrorKind::bad_input, "unknown set type: " + type);
}

namespace {

Json field_to_json(const VectorFieldTX& f) {
  Json comps = Json::array();
  for (const auto& p : f.comp) comps.push_back(poly_to_json(p));
  return comps;
}

VectorFieldTX field_from_json(const Json& j) {
  VectorFieldTX f;
  for (const auto& c : j) f.comp.push_back(poly_from_json(c));
  return f;
}

}  // namespace

Json problem_to_json(const ProblemSpec& p) {
  Json j;
  j["name"] = p.name;
  j["dimensions"] = Json{{"n", p.n}, {"m", p.m}, {"q", p.q}};
  if (p.f.mode == DriftField::Mode::affine) {
    Json a_terms = Json::array();
    for (const auto& t : p.f.a_terms) a_terms.push_back(field_to_json(t));
    j["drift"] = Json{{"affine", Json{{"base", field_to_json(p.f.base)}, {"a_terms", a_terms}}}};
  } else {
    Json pts = Json::array(), flds = Json::array();
    for (const auto& pt : p.f.table_points) pts.push_back(vec_to_json(pt));
    for (const auto& f : p.f.table) flds.push_back(field_to_json(f));
    j["drift"] = Json{{"tabulated", Json{{"points", pts}, {"fields", flds}}}};
  }
  Json g = Json::array();
  for (const auto& gi : p.g) g.push_back(field_to_json(gi));
  j["impulse_fields"] = g;
  Json h = Json::array();
  for (const auto& hi : p.h) {
    Json pieces = Json::array();
    for (const auto& piece : hi.pieces) pieces.push_back(poly_to_json(piece));
    h.push_back(Json{{"pieces", pieces}, {"tolerance", hi.activity_tol}});
  }
  j["constraints"] = h;
  j["cost"] = poly_to_json(p.cost.psi);
  j["target"] = set_to_json(p.target);
  Json cone;
  switch (p.cone.kind) {
    case ConeSpec::Kind::full:
      cone = Json{{"type", "full"}, {"dim", p.cone.dim}};
      break;
    case ConeSpec::Kind::zero:
      cone = Json{{"type", "zero"}, {"dim", p.cone.dim}};
      break;
    case ConeSpec::Kind::orthant:
      cone = Json{{"type", "orthant"}, {"dim", p.cone.dim}};
      break;
    case ConeSpec::Kind::ray:
      cone = Json{{"type", "ray"}, {"direction", vec_to_json(p.cone.direction)}};
      break;
    case ConeSpec::Kind::generated: {
      Json gens = Json::array();
      for (int c = 0; c < p.cone.generators.cols(); ++c)
        gens.push_back(vec_to_json(p.cone.generators.col(c)));
      cone = Json{{"type", "generated"}, {"dim", p.cone.dim}, {"generators", gens}};
      break;
    }
  }
  j["cone"] = cone;
  switch (p.a_set.kind) {
    case ControlSet::Kind::empty:
      j["control_set"] = Json{{"type", "empty"}};
      break;
    case ControlSet::Kind::finite: {
      Json pts = Json::array();
      for (const auto& pt : p.a_set.points) pts.push_back(vec_to_json(pt));
      j["control_set"] = Json{{"type", "finite"}, {"points", pts}};
      break;
    }
    case ControlSet::Kind::box:
      j["control_set"] = Json{{"type", "box"},
                              {"lower", vec_to_json(p.a_set.lower)},
                              {"upper", vec_to_json(p.a_set.upper)}};
      break;
  }
  j["variation_bound"] = std::isfinite(p.K) ? Json(p.K) : Json(nullptr);
  return j;
}

ProblemSpec problem_from_json(const Json& j) {
  ProblemSpec p;
  p.name = j.value("name", "");
  p.n = j.at("dimensions").at("n").get<int>();
  p.m = j.at("dimensions").at("m").get<int>();
  p.q = j.at("dimensions").at("q").get<int>();
  const Json& drift = j.at("drift");
  if (drift.contains("affine")) {
    p.f.mode = DriftField::Mode::affine;
    p.f.base = field_from_json(drift.at("affine").at("base"));
    for (const auto& t : drift.at("affine").at("a_terms")) p.f.a_terms.push_back(field_from_json(t));
  } else if (drift.contains("tabulated")) {
    p.f.mode = DriftField::Mode::tabulated;
    for (const auto& pt : drift.at("tabulated").at("points"))
      p.f.table_points.push_back(vec_from_json(pt));
    for (const auto& f : drift.at("tabulated").at("fields")) p.f.table.push_back(field_from_json(f));
    if (p.f.table.size() != p.f.table_points.size())
      throw Error(ErrorKind::bad_input, "tabulated drift: points/fields length mismatch");
  } else {
    throw Error(ErrorKind::bad_input, "drift must be 'affine' or 'tabulated'");
  }
  for (const auto& g : j.at("impulse_fields")) p.g.push_back(field_from_json(g));
  for (const auto& h : j.at("constraints")) {
    std::vector<Poly> pieces;
    for (const auto& piece : h.at("pieces")) pieces.push_back(poly_from_json(piece));
    p.h.push_back(ConstraintFunction::max_of_smooth(std::move(pieces), h.value("tolerance", 1e-8)));
  }
  p.cost.psi = poly_from_json(j.at("cost"));
  p.target = set_from_json(j.at("target"));
  const Json& cone = j.at("cone");
  std::string ck = cone.at("type").get<std::string>();
  if (ck == "full")
    p.cone = ConeSpec::make_full(cone.at("dim").get<int>());
  else if (ck == "zero")
    p.cone = ConeSpec::make_zero(cone.at("dim").get<int>());
  else if (ck == "orthant")
    p.cone = ConeSpec::make_orthant(cone.at("dim").get<int>());
  else if (ck == "ray")
    p.cone = ConeSpec::make_ray(vec_from_json(cone.at("direction")));
  else if (ck == "generated") {
    const Json& gens = cone.at("generators");
    Mat G(cone.at("dim").get<int>(), gens.size());
    for (size_t c = 0; c < gens.size(); ++c) G.col(static_cast<int>(c)) = vec_from_json(gens[c]);
    p.cone = ConeSpec::make_generated(G);
  } else {
    throw Error(ErrorKind::bad_input, "unknown cone type: " + ck);
  }
  const Json& aset = j.at("control_set");
  std::string ak = aset.at("type").get<std::string>();
  if (ak == "empty")
    p.a_set = ControlSet::make_empty();
  else if (ak == "finite") {
    std::vector<Vec> pts;
    for (const auto& pt : aset.at("points")) pts.push_back(vec_from_json(pt));
    p.a_set = ControlSet::make_finite(std::move(pts));
  } else if (ak == "box") {
    p.a_set = ControlSet::make_box(vec_from_json(aset.at("lower")), vec_from_json(aset.at("upper")));
  } else {
    throw Error(ErrorKind::bad_input, "unknown control_set type: " + ak);
  }
  p.K = j.at("variation_bound").is_null() ? kInf : j.at("variation_bound").get<double>();
  auto issues = validate(p);
  if (!issues.empty())
    throw Error(ErrorKind::bad_input, "problem validation failed: " + issues.front());
  return p;
}

ProblemSpec load_problem_file(const std::string& path) {
  return problem_from_json(read_json_file(path));
}

namespace {

void write_csv_impl(const std::string& path, const std::vector<double>& s,
                    const std::vector<double>& w0, const std::vector<Vec>& w,
                    const std::vector<Vec>& a, const std::vector<double>& y0,
                    const std::vector<Vec>& y, const std::vector<double>& nu) {
  std::ostringstream out;
  out.precision(17);
  const int m = w.empty() ? 0 : static_cast<int>(w.front().size());
  const int q = a.empty() ? 0 : static_cast<int>(a.front().size());
  const int n = static_cast<int>(y.front().size());
  out << "s,omega0";
  for (int j = 1; j <= m; ++j) out << ",omega_" << j;
  for (int j = 1; j <= q; ++j) out << ",alpha_" << j;
  out << ",y0";
  for (int j = 1; j <= n; ++j) out << ",y_" << j;
  out << ",nu\n";
  const int M = static_cast<int>(s.size()) - 1;
  for (int k = 0; k <= M; ++k) {
    int c = std::min(k, M - 1);
    out << s[k] << "," << w0[c];
    for (int j = 0; j < m; ++j) out << "," << w[c][j];
    for (int j = 0; j < q; ++j) out << "," << a[c][j];
    out << "," << y0[k];
    for (int j = 0; j < n; ++j) out << "," << y[k][j];
    out << "," << nu[k] << "\n";
  }
  write_text_file(path, out.str());
}

struct CsvData {
  std::vector<double> s, w0, y0, nu;
  std::vector<Vec> w, a, y;
};

CsvData read_csv_impl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
  std::string header;
  std::getline(in, header);
  int m = 0, q = 0, n = 0;
  {
    std::stringstream hs(header);
    std::string col;
    while (std::getline(hs, col, ',')) {
      if (col.rfind("omega_", 0) == 0) ++m;
      if (col.rfind("alpha_", 0) == 0) ++q;
      if (col.rfind("y_", 0) == 0) ++n;
    }
  }
  if (n == 0) throw Error(ErrorKind::io_error, "process CSV has no state columns: " + path);
  CsvData d;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    if (static_cast<int>(vals.size()) != 2 + m + q + 1 + n + 1)
      throw Error(ErrorKind::io_error, "malformed CSV row in " + path);
    int idx = 0;
    d.s.push_back(vals[idx++]);
    d.w0.push_back(vals[idx++]);
    Vec w(m);
    for (int j = 0; j < m; ++j) w[j] = vals[idx++];
    d.w.push_back(w);
    Vec a(q);
    for (int j = 0; j < q; ++j) a[j] = vals[idx++];
    d.a.push_back(a);
    d.y0.push_back(vals[idx++]);
    Vec y(n);
    for (int j = 0; j < n; ++j) y[j] = vals[idx++];
    d.y.push_back(y);
    d.nu.push_back(vals[idx++]);
  }
  if (d.s.size() < 2) throw Error(ErrorKind::io_error, "process CSV too short: " + path);
  return d;
}

}  // namespace

void write_process_csv(const std::string& path, const ExtendedProcess& proc) {
  write_csv_impl(path, proc.ctrl.s, proc.ctrl.omega0, proc.ctrl.omega, proc.ctrl.alpha, proc.y0,
                 proc.y, proc.nu);
}

ExtendedProcess read_process_csv(const std::string& path) {
  CsvData d = read_csv_impl(path);
  ExtendedProcess proc;
  const int M = static_cast<int>(d.s.size()) - 1;
  proc.ctrl.s = d.s;
  proc.ctrl.omega0.assign(d.w0.begin(), d.w0.begin() + M);
  proc.ctrl.omega.assign(d.w.begin(), d.w.begin() + M);
  proc.ctrl.alpha.assign(d.a.begin(), d.a.begin() + M);
  proc.y0 = d.y0;
  proc.y = d.y;
  proc.nu = d.nu;
  return proc;
}

void write_strict_csv(const std::string& path, const StrictProcess& proc) {
  const int M = proc.cells();
  std::vector<double> s(M + 1), y0(M + 1);
  for (int k = 0; k <= M; ++k) {
    s[k] = proc.t_node(k) - proc.t1;
    y0[k] = proc.t_node(k);
  }
  std::vector<double> w0(M, 1.0);
  write_csv_impl(path, s, w0, proc.dudt, proc.alpha, y0, proc.x, proc.v);
}

StrictProcess read_strict_csv(const std::string& path) {
  CsvData d = read_csv_impl(path);
  StrictProcess sp;
  const int M = static_cast<int>(d.s.size()) - 1;
  sp.t1 = d.y0.front();
  sp.t2 = d.y0.back();
  sp.dudt.assign(d.w.begin(), d.w.begin() + M);
  sp.alpha.assign(d.a.begin(), d.a.begin() + M);
  sp.x = d.y;
  sp.v = d.nu;
  const int m = static_cast<int>(d.w.front().size());
  sp.u.assign(M + 1, Vec::Zero(m));
  double dt = (sp.t2 - sp.t1) / M;
  for (int k = 0; k < M; ++k) sp.u[k + 1] = sp.u[k] + dt * sp.dudt[k];
  return sp;
}

Json multipliers_to_json(const MultiplierSet& m) {
  Json j;
  Json ptx = Json::array();
  for (const auto& v : m.ptx) ptx.push_back(vec_to_json(v));
  j["ptx"] = ptx;
  j["pi"] = m.pi;
  j["lambda"] = m.lambda;
  Json mus = Json::array();
  for (const auto& cm : m.mu) {
    Json atoms = Json::array();
    for (const auto& a : cm.atoms)
      atoms.push_back(Json{{"s", a.s}, {"mass", a.mass}, {"m", vec_to_json(a.m)}});
    Json dens = Json::array(), densm = Json::array();
    for (double r : cm.density) dens.push_back(r);
    for (const auto& v : cm.density_m) densm.push_back(vec_to_json(v));
    mus.push_back(Json{{"atoms", atoms}, {"density", dens}, {"density_m", densm}});
  }
  j["measures"] = mus;
  return j;
}

MultiplierSet multipliers_from_json(const Json& j) {
  MultiplierSet m;
  for (const auto& v : j.at("ptx")) m.ptx.push_back(vec_from_json(v));
  m.pi = j.at("pi").get<double>();
  m.lambda = j.at("lambda").get<double>();
  for (const auto& cm : j.at("measures")) {
    ConstraintMeasure out;
    for (const auto& a : cm.at("atoms")) {
      ConstraintMeasure::Atom atom;
      atom.s = a.at("s").get<double>();
      atom.mass = a.at("mass").get<double>();
      atom.m = vec_from_json(a.at("m"));
      out.atoms.push_back(atom);
    }
    for (const auto& r : cm.at("density")) out.density.push_back(r.get<double>());
    for (const auto& v : cm.at("density_m")) out.density_m.push_back(vec_from_json(v));
    m.mu.push_back(out);
  }
  return m;
}

Json to_json(const FeasibilityReport& r) {
  return Json{{"state_violation", r.state_violation},
              {"endpoint_distance", r.endpoint_distance},
              {"variation_excess", r.variation_excess},
              {"initial_variation", r.initial_variation},
              {"worst", r.worst()}};
}

Json to_json(const PmpReport& r) {
  return Json{{"nontriviality_margin", r.nontriviality_margin},
              {"adjoint_residual", r.adjoint_residual},
              {"transversality_distance", r.transversality_distance},
              {"hamiltonian_abs", r.hamiltonian_abs},
              {"maximization_defect", r.maximization_defect},
              {"subdiff_distance", r.subdiff_distance},
              {"support_violation", r.support_violation},
              {"pi_residual", r.pi_residual},
              {"strengthened_margin", r.strengthened_margin},
              {"strengthened_applicable", r.strengthened_applicable},
              {"inconclusive", r.inconclusive},
              {"note", r.note},
              {"pass", r.pass(PmpTolerances{})}};
}

namespace {
Json finite_json(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  return Json(v);
}
}  // namespace

Json to_json(const ConditionReport& r) {
  Json w = Json::array();
  for (const auto& s : r.witnesses) w.push_back(s);
  Json c = Json::array();
  for (double s : r.contact_instants) c.push_back(s);
  return Json{{"condition", r.condition}, {"status", to_string(r.status)},
              {"margin", finite_json(r.margin)}, {"eps_used", r.eps_used},
              {"contact_instants", c},           {"witnesses", w}};
}

Json to_json(const QualificationReport& r) {
  return Json{{"CNa", to_json(r.cna)},
              {"CQn_b", to_json(r.cqn_b)},
              {"CQn_f", to_json(r.cqn_f)},
              {"TQn_b", to_json(r.tqn_b)},
              {"TQn_f", to_json(r.tqn_f)}};
}

Json to_json(const NormalityVerdict& v) {
  Json j;
  j["verdict"] = to_string(v.verdict);
  j["base_cells"] = v.base_cells;
  j["refined_cells"] = v.refined_cells;
  j["note"] = v.note +
              " (verdict certified up to the discretization recorded here; the "
              "continuous-time notion is approximated)";
  if (v.certificate) j["certificate"] = multipliers_to_json(*v.certificate);
  if (v.certificate_check) j["certificate_check"] = to_json(*v.certificate_check);
  if (v.is_abnormal()) {
    j["nondegeneracy_margin"] = v.certificate_margin.margin;
    j["nondegeneracy_case"] =
        v.certificate_margin.advancing ? "time-advancing" : "time-frozen";
  }
  Json log = Json::array();
  for (const auto& s : v.lp_log) log.push_back(s);
  j["lp_log"] = log;
  return j;
}

Json to_json(const GapReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"eps", row.eps},
                        {"objective", row.objective},
                        {"feasibility", to_json(row.feas)},
                        {"d_infinity", row.d_infinity},
                        {"feasible", row.feasible}});
  }
  return Json{{"extended_objective", r.extended_objective},
              {"rows", rows},
              {"strict_limit_estimate", finite_json(r.strict_limit_estimate)},
              {"estimated_gap", finite_json(r.estimated_gap)},
              {"verdict",
               r.verdict == GapVerdict::no_gap_observed ? "no-gap-observed" : "gap-suspected"},
              {"note", r.note}};
}

Json to_json(const CompositeVerdict& v) {
  Json j{{"verdict", to_string(v.kind)},
         {"route", v.route},
         {"any_inconclusive", v.any_inconclusive},
         {"note", v.note}};
  if (v.abnormality_certificate)
    j["abnormality_certificate"] = multipliers_to_json(*v.abnormality_certificate);
  return j;
}

Json solve_result_to_json(const SolveResult& r) {
  Json outer_obj = Json::array(), outer_viol = Json::array();
  for (double v : r.diag.outer_objective) outer_obj.push_back(v);
  for (double v : r.diag.outer_violation) outer_viol.push_back(v);
  return Json{{"objective", r.objective},
              {"feasibility", to_json(r.feas)},
              {"S", r.process.S()},
              {"cells", r.process.cells()},
              {"diagnostics",
               Json{{"starts", r.diag.starts},
                    {"best_start", r.diag.best_start},
                    {"converged", r.diag.converged},
                    {"inner_monotone", r.diag.inner_monotone},
                    {"outer_objective", outer_obj},
                    {"outer_violation", outer_viol},
                    {"message", r.diag.message}}}};
}

bool validate_schema(const Json& value, const Json& schema, std::string* error) {
  auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return false;
  };
  if (schema.contains("enum")) {
    for (const auto& e : schema.at("enum"))
      if (e == value) return true;
    return fail("value not in enum");
  }
  if (schema.contains("type")) {
    std::string t = schema.at("type").get<std::string>();
    bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
              (t == "string" && value.is_string()) || (t == "boolean" && value.is_boolean()) ||
              (t == "null" && value.is_null()) ||
              (t == "number" && (value.is_number() || value.is_string())) ||
              (t == "integer" && value.is_number_integer());
    // "number" admits the "inf"/"-inf" string sentinels used by the reports
    if (t == "number" && value.is_string()) {
      std::string s = value.get<std::string>();
      ok = s == "inf" || s == "-inf";
    }
    if (!ok) return fail("type mismatch: expected " + t);
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& k : schema.at("required"))
        if (!value.contains(k.get<std::string>()))
          return fail("missing required key " + k.get<std::string>());
    }
    if (schema.contains("properties")) {
      for (auto it = schema.at("properties").begin(); it != schema.at("properties").end(); ++it) {
        if (value.contains(it.key()) && !validate_schema(value.at(it.key()), it.value(), error))
          return false;
      }
      if (schema.value("additionalProperties", true) == false) {
        for (auto it = value.begin(); it != value.end(); ++it)
          if (!schema.at("properties").contains(it.key()))
            return fail("unknown key " + it.key());
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    for (const auto& item : value)
      if (!validate_schema(item, schema.at("items"), error)) return false;
  }
  return true;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io_error, "cannot write " + path);
  out << content;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::io_error, "malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace gapcert
