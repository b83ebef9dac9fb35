#include "imcheck/io/problem.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "toml.hpp"

namespace imcheck::io {

using algebroid::LieAlgebroid;
using algebroid::Matrix;
using algebroid::Structure;
using cartan::Chart;
using cartan::KForm;
using sym::Expr;

namespace {

const std::vector<std::string> kKinds{"algebroid", "im", "linear-form", "dirac", "pair-groupoid", "identity-suite"};

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw InputError(where + ": " + what); }

const toml::table& table_at(const toml::table& t, std::string_view key, const std::string& where) {
  const auto* sub = t.get_as<toml::table>(key);
  if (!sub) fail(where, "missing table [" + std::string(key) + "]");
  return *sub;
}

std::string string_at(const toml::table& t, std::string_view key, const std::string& where) {
  auto v = t[key].value<std::string>();
  if (!v) fail(where, "'" + std::string(key) + "' must be a string");
  return *v;
}

Expr expr_of(const toml::node& node, const std::string& where) {
  if (auto s = node.value<std::string>()) {
    try {
      return sym::parse(*s);
    } catch (const std::exception& e) {
      fail(where, "cannot parse '" + *s + "': " + e.what());
    }
  }
  if (auto i = node.value<std::int64_t>(); i && node.is_integer()) return Expr(*i);
  fail(where, "expected an expression string or an integer");
}

Chart chart_of(const toml::table& t, const std::string& where) {
  const auto* node = t.get("chart");
  if (!node) fail(where, "missing 'chart'");
  std::vector<std::string> names;
  if (auto s = node->value<std::string>()) {
    if (s->find_first_not_of(" \t") == std::string::npos) return Chart();
    try {
      return Chart::parse_list(*s);
    } catch (const std::exception& e) {
      fail(where, std::string("bad chart: ") + e.what());
    }
  }
  const auto* arr = node->as_array();
  if (!arr) fail(where, "'chart' must be a string or an array of names");
  for (const auto& n : *arr) {
    auto s = n.value<std::string>();
    if (!s) fail(where, "chart names must be strings");
    names.push_back(*s);
  }
  try {
    return Chart(std::move(names));
  } catch (const std::exception& e) {
    fail(where, std::string("bad chart: ") + e.what());
  }
}

void check_variables(const Expr& e, const Chart& chart, const std::string& where) {
  for (const auto& v : e.free_variables())
    if (!chart.index_of(v)) fail(where, "'" + v + "' is not a coordinate of the chart");
}

Matrix matrix_of(const toml::table& t, std::string_view key, std::size_t rows, std::size_t cols, const Chart& chart,
                 const std::string& where) {
  const auto* arr = t.get_as<toml::array>(key);
  const std::string at = where + "." + std::string(key);
  if (!arr) fail(where, "missing array '" + std::string(key) + "'");
  if (arr->size() != rows) fail(at, "expected " + std::to_string(rows) + " rows");
  Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto* row = (*arr)[i].as_array();
    if (!row || row->size() != cols) fail(at, "row " + std::to_string(i + 1) + " must have " + std::to_string(cols) + " entries");
    m.emplace_back();
    for (const auto& entry : *row) {
      m.back().push_back(expr_of(entry, at));
      check_variables(m.back().back(), chart, at);
    }
  }
  return m;
}

std::size_t count_at(const toml::table& t, std::string_view key, const std::string& where) {
  auto v = t[key].value<std::int64_t>();
  if (!v || *v < 0) fail(where, "'" + std::string(key) + "' must be a non-negative integer");
  return static_cast<std::size_t>(*v);
}

KForm form_of(const toml::node& node, const Chart& chart, int degree, const std::string& where) {
  KForm out(chart, degree);
  if (auto s = node.value<std::string>()) {
    try {
      out = cartan::parse_form(*s, chart);
    } catch (const std::exception& e) {
      fail(where, "cannot parse form '" + *s + "': " + e.what());
    }
  } else if (const auto* records = node.as_array()) {
    for (const auto& rec : *records) {
      const auto* r = rec.as_table();
      if (!r) fail(where, "form records must be tables {indices, value}");
      const auto* idx = r->get_as<toml::array>("indices");
      if (!idx || idx->size() != static_cast<std::size_t>(degree)) fail(where, "record needs " + std::to_string(degree) + " indices");
      cartan::Indices indices;
      for (const auto& i : *idx) {
        auto v = i.value<std::int64_t>();
        if (!v || *v < 1 || static_cast<std::size_t>(*v) > chart.dim()) fail(where, "index out of range");
        indices.push_back(static_cast<int>(*v - 1));
      }
      const auto* value = r->get("value");
      if (!value) fail(where, "record without 'value'");
      Expr c = expr_of(*value, where);
      check_variables(c, chart, where);
      out.add(indices, c);
    }
  } else {
    fail(where, "a form is a string or an array of records");
  }
  if (out.degree() != degree && !out.is_zero()) fail(where, "expected a " + std::to_string(degree) + "-form");
  if (out.degree() != degree) out = KForm(chart, degree);
  return out;
}

KForm optional_form(const toml::table& t, std::string_view key, const Chart& chart, int degree,
                    const std::string& where) {
  const auto* node = t.get(key);
  return node ? form_of(*node, chart, degree, where + "." + std::string(key)) : KForm(chart, degree);
}

Structure structure_of(const toml::table& t, std::size_t rank, const Chart& chart, const std::string& where) {
  Structure c(rank, Matrix(rank, std::vector<Expr>(rank)));
  const auto* arr = t.get_as<toml::array>("structure");
  if (!arr) return c;
  const bool antisymmetrize = t["antisymmetrize"].value_or(true);
  const std::string at = where + ".structure";
  for (const auto& rec : *arr) {
    const auto* r = rec.as_table();
    if (!r) fail(at, "entries are tables {c, a, b, value}");
    auto index = [&](std::string_view key) {
      auto v = (*r)[key].value<std::int64_t>();
      if (!v || *v < 1 || static_cast<std::size_t>(*v) > rank) fail(at, "'" + std::string(key) + "' out of range");
      return static_cast<std::size_t>(*v - 1);
    };
    std::size_t k = index("c"), a = index("a"), b = index("b");
    const auto* value = r->get("value");
    if (!value) fail(at, "entry without 'value'");
    Expr v = expr_of(*value, at);
    check_variables(v, chart, at);
    c[k][a][b] = v;
    if (antisymmetrize) {
      if (a == b && !v.is_zero()) fail(at, "C^c_aa must vanish");
      c[k][b][a] = -v;
    }
  }
  return c;
}

LieAlgebroid algebroid_of(const toml::table& t, const std::string& where) {
  if (auto builtin = t["builtin"].value<std::string>()) {
    for (auto& ex : catalog::builtin_algebroids())
      if (ex.name == *builtin) return ex.algebroid;
    fail(where, "unknown builtin algebroid '" + *builtin + "'");
  }
  const std::string type = string_at(t, "type", where);
  try {
    if (type == "tangent") return algebroid::tangent_bundle_algebroid(chart_of(t, where));
    if (type == "koszul") {
      Chart chart = chart_of(t, where);
      return algebroid::koszul_algebroid(chart, matrix_of(t, "poisson", chart.dim(), chart.dim(), chart, where));
    }
    if (type == "lie-algebra") {
      std::size_t r = count_at(t, "rank", where);
      return algebroid::lie_algebra(structure_of(t, r, Chart(), where));
    }
    if (type == "general") {
      Chart chart = chart_of(t, where);
      std::size_t r = count_at(t, "rank", where);
      std::vector<std::string> names;
      if (const auto* arr = t.get_as<toml::array>("sections"))
        for (const auto& n : *arr) names.push_back(n.value_or(std::string{}));
      return LieAlgebroid(chart, matrix_of(t, "anchor", chart.dim(), r, chart, where),
                          structure_of(t, r, chart, where), std::move(names));
    }
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  fail(where, "unknown algebroid type '" + type + "'");
}

sym::CheckOptions options_of(const toml::table& root) {
  sym::CheckOptions opts = default_options();
  const auto* t = root.get_as<toml::table>("options");
  if (!t) return opts;
  const std::string where = "[options]";
  if (auto mode = (*t)["mode"].value<std::string>()) {
    if (*mode == "symbolic") opts.mode = sym::Mode::Symbolic;
    else if (*mode == "numeric") opts.mode = sym::Mode::Numeric;
    else fail(where, "mode must be 'symbolic' or 'numeric'");
  }
  if (t->contains("samples")) opts.samples = count_at(*t, "samples", where);
  if (t->contains("seed")) opts.seed = count_at(*t, "seed", where);
  if (auto tol = (*t)["tolerance"].value<double>()) {
    if (!(*tol > 0)) fail(where, "tolerance must be positive");
    opts.tol = *tol;
  }
  if (const auto* box = t->get_as<toml::array>("box")) {
    auto lo = (*box)[0].value<double>(), hi = (*box)[1].value<double>();
    if (box->size() != 2 || !lo || !hi || !(*lo < *hi)) fail(where, "box must be [lo, hi] with lo < hi");
    opts.box_lo = *lo;
    opts.box_hi = *hi;
  }
  if (opts.samples == 0) fail(where, "samples must be positive");
  return opts;
}

Payload payload_of(const std::string& kind, const toml::table& root, const sym::CheckOptions& opts) {
  const std::string name = root["name"].value_or(std::string{});
  if (kind == "algebroid") return AlgebroidProblem{name, algebroid_of(table_at(root, "algebroid", "file"), "[algebroid]")};

  if (kind == "im") {
    const auto& im = table_at(root, "im", "file");
    if (auto example = im["example"].value<std::string>()) {
      try {
        return IMProblem{name.empty() ? *example : name, catalog::find_example(*example).data};
      } catch (const std::out_of_range&) {
        fail("[im]", "unknown example '" + *example + "'");
      }
    }
    LieAlgebroid al = algebroid_of(table_at(root, "algebroid", "file"), "[algebroid]");
    Matrix sigma = matrix_of(im, "sigma", al.dim(), al.rank(), al.base(), "[im]");
    KForm phi = optional_form(im, "phi", al.base(), 3, "[im]");
    try {
      return IMProblem{name, imform::IM2FormData(al, std::move(sigma), std::move(phi), opts)};
    } catch (const std::invalid_argument& e) {
      fail("[im]", e.what());
    }
  }

  if (kind == "linear-form") {
    const auto& t = table_at(root, "linear-form", "file");
    algebroid::BundleCharts charts(chart_of(t, "[linear-form]"), count_at(t, "rank", "[linear-form]"));
    const auto* form = t.get("form");
    if (!form) fail("[linear-form]", "missing 'form'");
    return LinearFormProblem{charts, form_of(*form, charts.bundle, 2, "[linear-form].form")};
  }

  if (kind == "dirac") {
    const std::string where = "[dirac]";
    const auto& t = table_at(root, "dirac", "file");
    Chart chart = chart_of(t, where);
    KForm phi = optional_form(t, "phi", chart, 3, where);
    DiracProblem p{{chart, {}, phi}, t["tolerance"].value_or(1e-8)};
    if (const auto* graph = t.get("graph")) {
      p.frame = catalog::DiracFrame::graph(form_of(*graph, chart, 2, where + ".graph"), phi);
    } else {
      const auto* sections = t.get_as<toml::array>("sections");
      if (!sections || sections->size() != chart.dim()) fail(where, "need 'graph' or one section per coordinate");
      for (const auto& s : *sections) {
        const auto* st = s.as_table();
        if (!st) fail(where, "sections are tables {vector, form}");
        const auto* vec = st->get_as<toml::array>("vector");
        if (!vec || vec->size() != chart.dim()) fail(where, "section vector needs one entry per coordinate");
        catalog::DiracSection section{{}, optional_form(*st, "form", chart, 1, where)};
        for (const auto& e : *vec) {
          section.vector.push_back(expr_of(e, where));
          check_variables(section.vector.back(), chart, where);
        }
        p.frame.sections.push_back(std::move(section));
      }
    }
    return p;
  }

  if (kind == "pair-groupoid") {
    const std::string where = "[pair-groupoid]";
    const auto& t = table_at(root, "pair-groupoid", "file");
    catalog::PairGroupoid g(chart_of(t, where));
    if (const auto* omega = t.get("omega")) return GroupoidProblem{g, form_of(*omega, g.arrows(), 2, where + ".omega")};
    const auto* beta_node = t.get("beta");
    if (!beta_node) fail(where, "need 'omega' or 'beta'");
    KForm beta = form_of(*beta_node, g.base(), 2, where + ".beta");
    const std::string combine = t["combine"].value_or(std::string("difference"));
    if (combine == "difference") return GroupoidProblem{g, g.telescoped(beta)};
    if (combine == "sum") return GroupoidProblem{g, pullback(g.target(), beta) + pullback(g.source(), beta)};
    fail(where, "combine must be 'difference' or 'sum'");
  }

  if (kind == "identity-suite") {
    const std::string where = "[identity-suite]";
    IdentityProblem p{{"exterior", "tangent"}, 50};
    if (const auto* t = root.get_as<toml::table>("identity-suite")) {
      if (const auto* suites = t->get_as<toml::array>("suites")) {
        p.suites.clear();
        for (const auto& s : *suites) {
          auto v = s.value<std::string>();
          if (!v || (*v != "exterior" && *v != "tangent")) fail(where, "suites are 'exterior' or 'tangent'");
          p.suites.push_back(*v);
        }
      }
      if (t->contains("trials")) p.trials = count_at(*t, "trials", where);
    }
    return p;
  }
  fail("file", "unknown kind '" + kind + "'");
}

}  // namespace

sym::CheckOptions default_options() {
  sym::CheckOptions opts;
  if (const char* env = std::getenv("IMCHECK_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) opts.seed = v;
  }
  return opts;
}

Problem parse_problem(std::string_view text, const std::string& origin) {
  toml::table root;
  try {
    root = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " (" << e.source().begin << ")";
    throw InputError(origin + ": " + msg.str());
  }
  auto kind = root["kind"].value<std::string>();
  if (!kind) throw InputError(origin + ": missing 'kind'");
  if (std::find(kKinds.begin(), kKinds.end(), *kind) == kKinds.end())
    throw InputError(origin + ": unknown kind '" + *kind + "'");
  sym::CheckOptions opts = options_of(root);
  try {
    return Problem{*kind, opts, payload_of(*kind, root, opts)};
  } catch (const InputError& e) {
    throw InputError(origin + ": " + e.what());
  }
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str(), path.string());
}

std::string export_example(const catalog::IMExample& example) {
  const auto& data = example.data;
  const auto& al = data.algebroid();
  auto strings = [](const Matrix& m) {
    toml::array rows;
    for (const auto& row : m) {
      toml::array r;
      for (const auto& e : row) r.push_back(e.str());
      rows.push_back(std::move(r));
    }
    return rows;
  };
  toml::array chart;
  for (const auto& x : al.base().names()) chart.push_back(x);
  toml::array structure;
  for (std::size_t c = 0; c < al.rank(); ++c)
    for (std::size_t a = 0; a < al.rank(); ++a)
      for (std::size_t b = a + 1; b < al.rank(); ++b)
        if (!al.structure(c, a, b).is_zero())
          structure.push_back(toml::table{{"c", static_cast<std::int64_t>(c + 1)},
                                          {"a", static_cast<std::int64_t>(a + 1)},
                                          {"b", static_cast<std::int64_t>(b + 1)},
                                          {"value", al.structure(c, a, b).str()}});
  toml::array sections;
  for (const auto& s : al.section_names()) sections.push_back(s);

  toml::table algebroid{{"type", "general"},
                        {"chart", std::move(chart)},
                        {"rank", static_cast<std::int64_t>(al.rank())},
                        {"anchor", strings(al.anchor_matrix())},
                        {"structure", std::move(structure)},
                        {"sections", std::move(sections)}};
  toml::table im{{"sigma", strings(data.sigma())}};
  if (!data.phi().is_zero()) im.insert("phi", data.phi().str());
  toml::table root{{"kind", "im"}, {"name", example.name}, {"algebroid", std::move(algebroid)}, {"im", std::move(im)}};
  std::ostringstream out;
  out << "# " << example.description << "\n" << root << "\n";
  return out.str();
}

}  // namespace imcheck::io
