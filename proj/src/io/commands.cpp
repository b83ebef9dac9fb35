#include "imcheck/io/commands.hpp"

#include <cstdio>
#include <sstream>

#include "imcheck/tanlift/identities.hpp"

namespace imcheck::io {

using cartan::KForm;
using sym::Verdict;

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Json matrix_json(const algebroid::Matrix& m) {
  Json rows = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(e.str());
    rows.push_back(std::move(r));
  }
  return rows;
}

class Text {
 public:
  void line(const std::string& s) { out_ << s << '\n'; }
  void check(const sym::NamedCheck& c) {
    const auto& o = c.outcome;
    std::string tag(sym::verdict_name(o.verdict));
    for (auto& ch : tag) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    std::string s = tag + std::string(13 - tag.size(), ' ') + c.name;
    if (o.numeric_comparisons > 0) s += "  (" + std::to_string(o.numeric_comparisons) + " numeric, max residual " + number(o.max_residual) + ")";
    line(s);
    if (o.witness) {
      std::string p;
      for (const auto& [k, v] : o.witness->point) p += (p.empty() ? "" : ", ") + k + "=" + number(v);
      line("             witness: " + o.witness->label + " at (" + p + "): " + number(o.witness->lhs) +
           " vs " + number(o.witness->rhs));
    }
    if (!o.note.empty()) line("             note: " + o.note);
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

struct Builder {
  Json json;
  Text text;
  Verdict verdict = Verdict::Pass;
  Json checks = Json::array();

  Builder(const std::string& command, const std::string& name) {
    json["command"] = command;
    if (!name.empty()) json["name"] = name;
    text.line(command + (name.empty() ? "" : " " + name));
  }
  void add(const sym::NamedCheck& c) {
    checks.push_back(to_json(c));
    text.check(c);
    verdict = sym::combine(verdict, c.outcome.verdict);
  }
  RunResult finish() {
    json["verdict"] = std::string(sym::verdict_name(verdict));
    if (!checks.empty()) json["checks"] = checks;
    text.line(std::string("verdict: ") + std::string(sym::verdict_name(verdict)));
    return {json, text.str(), verdict};
  }
};

sym::NamedCheck numeric_check(const std::string& name, double residual, double tol) {
  sym::CheckOutcome o;
  o.max_residual = residual;
  o.verdict = residual < tol ? Verdict::Pass : Verdict::Fail;
  if (!(residual < tol)) o.note = "residual " + number(residual) + " exceeds " + number(tol);
  return {name, o};
}

void add_axioms(Builder& b, const std::string& prefix, const algebroid::LieAlgebroid& al, const sym::CheckOptions& opts) {
  for (const auto& c : algebroid::check_axioms(al, opts).checks) b.add({prefix + c.name, c.outcome});
}

void add_sharp_cross_check(Builder& b, const imform::IM2FormData& data, const sym::CheckOptions& opts) {
  auto lambda = imform::build_lambda(data);
  auto cmp = imform::map_comparisons("sharp", imform::lambda_sharp(data),
                                     imform::contraction_sharp(lambda.form, data.charts()));
  b.add({"lambda_sharp = contraction of Lambda", sym::compare_all(cmp, opts)});
}

void add_im(Builder& b, const imform::IMReport& im) {
  b.add(im.im1);
  b.add(im.im2);
}

}  // namespace

int exit_code(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass:
      return 0;
    case Verdict::Fail:
      return 1;
    case Verdict::Inconclusive:
      return 3;
  }
  return 1;
}

Json to_json(const sym::CheckOutcome& o) {
  Json j;
  j["verdict"] = std::string(sym::verdict_name(o.verdict));
  j["numeric_comparisons"] = o.numeric_comparisons;
  j["max_residual"] = o.max_residual;
  if (o.witness) {
    Json point = Json::object();
    for (const auto& [k, v] : o.witness->point) point[k] = v;
    j["witness"] = {{"label", o.witness->label}, {"point", point}, {"lhs", o.witness->lhs}, {"rhs", o.witness->rhs}};
  }
  if (!o.note.empty()) j["note"] = o.note;
  return j;
}

Json to_json(const sym::NamedCheck& c) {
  Json j;
  j["name"] = c.name;
  const Json outcome = to_json(c.outcome);
  for (const auto& [k, v] : outcome.items()) j[k] = v;
  return j;
}

RunResult run_check_algebroid(const AlgebroidProblem& p, const sym::CheckOptions& opts, std::size_t triples) {
  Builder b("check-algebroid", p.name);
  const auto& al = p.algebroid;
  b.json["dim"] = al.dim();
  b.json["rank"] = al.rank();
  add_axioms(b, "", al, opts);
  tanlift::TangentChart tm(al.base());
  algebroid::BundleCharts charts(al.base(), al.rank());
  auto ta = algebroid::tangent_algebroid(al, tm);
  auto tsa = algebroid::cotangent_algebroid(al, charts.dual);
  add_axioms(b, "TA ", ta, opts);
  add_axioms(b, "T*A ", tsa, opts);
  if (triples > 0) {
    for (const auto& [label, prolonged] : {std::pair{"TA", &ta}, std::pair{"T*A", &tsa}}) {
      auto r = algebroid::random_triple_check(*prolonged, triples, opts.seed);
      double worst = std::max({r.max_jacobi, r.max_antisymmetry, r.max_anchor});
      b.add(numeric_check(std::string(label) + " random triples (" + std::to_string(r.triples) + ")", worst, 1e-10));
    }
  }
  return b.finish();
}

RunResult run_check_im(const IMProblem& p, const sym::CheckOptions& opts) {
  Builder b("check-im", p.name);
  add_im(b, imform::check_im(p.data, opts));
  return b.finish();
}

RunResult run_check_morphism(const IMProblem& p, const sym::CheckOptions& opts) {
  Builder b("check-morphism", p.name);
  auto report = imform::check_morphism(p.data, opts);
  for (const auto& c : report.cases) b.add(c);
  // IM results are informative here; the verdict is the morphism conjunction.
  Json im = Json::array();
  im.push_back(to_json(report.im.im1));
  im.push_back(to_json(report.im.im2));
  b.json["im"] = im;
  b.text.line(std::string("IM conditions: ") + std::string(sym::verdict_name(report.im.verdict())));
  return b.finish();
}

RunResult run_build_lambda(const IMProblem& p, const sym::CheckOptions& opts) {
  Builder b("build-lambda", p.name);
  auto lambda = imform::build_lambda(p.data);
  b.json["form"] = lambda.form.str();
  b.json["linear"] = lambda.linear;
  b.json["covering_map"] = matrix_json(lambda.lambda);
  b.text.line(lambda.form.str());
  sym::CheckOutcome shape;
  if (!lambda.linear) {
    shape.verdict = Verdict::Fail;
    shape.note = lambda.shape_note;
  }
  b.add({"linear shape", shape});
  add_sharp_cross_check(b, p.data, opts);
  return b.finish();
}

RunResult run_analyze_linear(const LinearFormProblem& p, const sym::CheckOptions& opts) {
  Builder b("analyze-linear", "");
  auto a = imform::analyze_linear(p.form, p.charts, opts);
  b.json["form"] = p.form.str();
  b.json["linear"] = a.linear();
  if (!a.linear()) {
    b.json["shape_note"] = a.form.shape_note;
    b.text.line("not linear: " + a.form.shape_note);
    return b.finish();
  }
  b.json["covering_map"] = matrix_json(a.form.lambda);
  b.json["closed"] = to_json(a.closed);
  b.json["reconstructs"] = to_json(a.reconstructs);
  b.text.line(std::string("closed: ") + std::string(sym::verdict_name(a.closed.verdict)));
  b.text.line(std::string("reconstructs from the covering map: ") + std::string(sym::verdict_name(a.reconstructs.verdict)));
  sym::CheckOutcome bi;
  if (a.closed.verdict == Verdict::Inconclusive || a.reconstructs.verdict == Verdict::Inconclusive)
    bi.verdict = Verdict::Inconclusive;
  else if (!a.biconditional_holds())
    bi.verdict = Verdict::Fail;
  b.add({"closed iff reconstructs", bi});
  return b.finish();
}

RunResult run_check_dirac(const DiracProblem& p, const sym::CheckOptions& opts) {
  Builder b("check-dirac", "");
  auto r = catalog::check_dirac(p.frame, opts, p.tolerance);
  b.json["accepted"] = r.accepted;
  if (!r.accepted) {
    b.json["rejection"] = r.rejection;
    if (r.pair) b.json["pair"] = {r.pair->first, r.pair->second};
    b.json["point"] = r.point;
    std::string s = "rejected: " + r.rejection;
    if (r.pair) s += " for sections (" + std::to_string(r.pair->first) + "," + std::to_string(r.pair->second) + ")";
    b.text.line(s);
  }
  b.add({"isotropy", r.isotropy});
  if (r.rejection != "isotropy") {
    b.json["min_rank"] = r.min_rank;
    sym::CheckOutcome rank;
    if (r.min_rank < p.frame.base.dim()) rank.verdict = Verdict::Fail;
    b.add({"rank", rank});
    b.add(numeric_check("involutivity", r.max_involutivity, p.tolerance));
    b.add(numeric_check("IM1 (numeric)", r.max_im1, p.tolerance));
    b.add(numeric_check("IM2 (numeric)", r.max_im2, p.tolerance));
    b.add(numeric_check("anchor (numeric)", r.max_anchor, p.tolerance));
  }
  return b.finish();
}

RunResult run_check_groupoid(const GroupoidProblem& p, const sym::CheckOptions& opts) {
  Builder b("check-groupoid", "");
  auto r = catalog::pair_groupoid_check(p.groupoid, p.omega, opts);
  b.json["omega"] = p.omega.str();
  b.json["lie_form"] = r.lie_form.str();
  b.json["sigma"] = matrix_json(r.sigma);
  b.json["phi"] = r.phi.str();
  b.add(r.structure_maps);
  b.add(r.multiplicative);
  b.add(r.relatively_closed);
  b.add(r.relation);
  b.text.line("LF(omega) = " + r.lie_form.str());
  b.text.line("phi = " + r.phi.str());
  return b.finish();
}

RunResult run_identities(const IdentityProblem& p, std::uint64_t seed) {
  Builder b("verify-identities", "");
  b.json["trials"] = p.trials;
  for (const auto& suite : p.suites) {
    auto ids = suite == "exterior" ? cartan::exterior_identities() : tanlift::tangent_identities();
    for (const auto& id : ids) {
      auto r = cartan::run_identity(id, p.trials, seed);
      sym::CheckOutcome o;
      o.numeric_comparisons = r.numeric;
      if (r.failures > 0) {
        o.verdict = Verdict::Fail;
        o.note = std::to_string(r.failures) + " of " + std::to_string(r.comparisons) + " comparisons failed; first: " +
                 r.first_failure;
      } else if (r.numeric > 0) {
        o.verdict = Verdict::Inconclusive;
        o.note = "not settled symbolically";
      }
      b.add({suite + ": " + r.name, o});
      b.checks.back()["comparisons"] = r.comparisons;
    }
  }
  return b.finish();
}

RunResult run_lift(std::string_view chart_text, std::string_view form_text, bool tau) {
  cartan::Chart chart;
  KForm a;
  try {
    chart = cartan::Chart::parse_list(chart_text);
    a = cartan::parse_form(form_text, chart);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  if (tau && a.degree() == 0) throw InputError("tau needs a form of positive degree");
  tanlift::TangentChart tm(chart);
  KForm out = tau ? tanlift::tau(tm, a) : tanlift::tangent_lift(tm, a);
  RunResult r;
  r.json["command"] = tau ? "tau" : "lift";
  r.json["chart"] = tm.total().names();
  r.json["form"] = a.str();
  r.json["result"] = out.str();
  r.text = out.str() + "\n";
  return r;
}

std::vector<std::string> demo_names() {
  std::vector<std::string> out;
  for (const auto& e : catalog::builtin_examples()) out.push_back(e.name);
  for (const auto& e : catalog::builtin_dirac()) out.push_back(e.name);
  for (const char* n : {"pair_plane_beta", "pair_r3_beta", "pair_sign_mutation"}) out.emplace_back(n);
  return out;
}

RunResult run_demo(std::string_view name, const sym::CheckOptions& opts) {
  for (const auto& e : catalog::builtin_examples()) {
    if (e.name != name) continue;
    Builder b("demo", e.name);
    b.json["description"] = e.description;
    b.json["predicted_failures"] = e.failing_cases;
    b.text.line(e.description);
    add_axioms(b, "", e.data.algebroid(), opts);
    add_im(b, imform::check_im(e.data, opts));
    auto morphism = imform::check_morphism(e.data, opts);
    for (const auto& c : morphism.cases) b.add({"morphism " + c.name, c.outcome});
    add_sharp_cross_check(b, e.data, opts);
    b.json["lambda"] = imform::build_lambda(e.data).form.str();
    b.text.line("Lambda = " + imform::build_lambda(e.data).form.str());
    return b.finish();
  }
  for (const auto& e : catalog::builtin_dirac()) {
    if (e.name != name) continue;
    RunResult r = run_check_dirac({e.frame, 1e-8}, opts);
    r.json["command"] = "demo";
    r.json["name"] = e.name;
    return r;
  }
  const cartan::Chart r2 = cartan::Chart::parse_list("x1,x2"), r3 = cartan::Chart::parse_list("x1,x2,x3");
  auto pair = [&](const cartan::Chart& base, std::string_view beta_text, bool sum) {
    catalog::PairGroupoid g(base);
    KForm beta = cartan::parse_form(beta_text, base);
    KForm omega = sum ? pullback(g.target(), beta) + pullback(g.source(), beta) : g.telescoped(beta);
    RunResult r = run_check_groupoid({g, omega}, opts);
    r.json["command"] = "demo";
    r.json["name"] = std::string(name);
    return r;
  };
  if (name == "pair_plane_beta") return pair(r2, "x1*dx1^dx2", false);
  if (name == "pair_r3_beta") return pair(r3, "x2*dx1^dx3", false);
  if (name == "pair_sign_mutation") return pair(r2, "x1*dx1^dx2", true);
  throw InputError("unknown demo '" + std::string(name) + "'");
}

}  // namespace imcheck::io
