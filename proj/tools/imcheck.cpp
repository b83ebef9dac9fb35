#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "imcheck/io/commands.hpp"

using namespace imcheck;

namespace {

struct Overrides {
  std::optional<std::string> mode;
  std::optional<std::size_t> samples;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  bool json = false;
  std::string output;

  sym::CheckOptions apply(sym::CheckOptions opts) const {
    if (mode) {
      if (*mode == "symbolic") opts.mode = sym::Mode::Symbolic;
      else if (*mode == "numeric") opts.mode = sym::Mode::Numeric;
      else throw io::InputError("--mode must be symbolic or numeric");
    }
    if (samples) opts.samples = *samples;
    if (tolerance) opts.tol = *tolerance;
    if (seed) opts.seed = *seed;
    return opts;
  }
};

template <class T>
const T& payload(const io::Problem& p, std::string_view kind) {
  if (p.kind != kind) throw io::InputError("expected a problem of kind '" + std::string(kind) + "', got '" + p.kind + "'");
  return std::get<T>(p.payload);
}

int emit(const io::RunResult& r, const Overrides& o) {
  const std::string json = r.json.dump(2) + "\n";
  if (o.json) std::cout << json;
  else std::cout << r.text;
  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) {
      std::cerr << "cannot write " << o.output << "\n";
      return 2;
    }
    out << json;
  }
  return io::exit_code(r.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks IM 2-forms, Lie algebroids and their prolongations"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--mode", o.mode, "symbolic or numeric");
  app.add_option("--samples", o.samples, "numeric samples per comparison");
  app.add_option("--tolerance", o.tolerance, "numeric tolerance");
  app.add_option("--seed", o.seed, "random seed (default: IMCHECK_SEED, then 42)");
  app.add_flag("--json", o.json, "print the JSON report instead of text");
  app.add_option("-o,--output", o.output, "also write the JSON report to a file");

  std::string file;
  std::function<io::RunResult()> run;
  auto file_command = [&](const std::string& name, const std::string& help, auto body) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", file, "problem file (TOML)")->required();
    sub->callback([&, body] {
      run = [&, body] {
        io::Problem p = io::load_problem(file);
        return body(p, o.apply(p.options));
      };
    });
    return sub;
  };

  std::size_t triples = 20;
  file_command("check-algebroid", "axioms of an algebroid and of its prolongations",
               [&](const io::Problem& p, const sym::CheckOptions& opts) {
                 return io::run_check_algebroid(payload<io::AlgebroidProblem>(p, "algebroid"), opts, triples);
               })
      ->add_option("--triples", triples, "random general triples per prolongation");
  file_command("check-im", "the IM1 and IM2 conditions", [](const io::Problem& p, const sym::CheckOptions& opts) {
    return io::run_check_im(payload<io::IMProblem>(p, "im"), opts);
  });
  file_command("check-morphism", "Lambda-sharp as an algebroid morphism, case by case",
               [](const io::Problem& p, const sym::CheckOptions& opts) {
                 return io::run_check_morphism(payload<io::IMProblem>(p, "im"), opts);
               });
  file_command("build-lambda", "the linear 2-form of an IM 2-form", [](const io::Problem& p, const sym::CheckOptions& opts) {
    return io::run_build_lambda(payload<io::IMProblem>(p, "im"), opts);
  });
  file_command("analyze-linear", "shape, closedness and reconstruction of a 2-form on a vector bundle",
               [](const io::Problem& p, const sym::CheckOptions& opts) {
                 return io::run_analyze_linear(payload<io::LinearFormProblem>(p, "linear-form"), opts);
               });
  file_command("check-dirac", "twisted Dirac frame and its IM 2-form", [](const io::Problem& p, const sym::CheckOptions& opts) {
    return io::run_check_dirac(payload<io::DiracProblem>(p, "dirac"), opts);
  });
  file_command("check-groupoid", "multiplicative 2-form on a pair groupoid", [](const io::Problem& p, const sym::CheckOptions& opts) {
    return io::run_check_groupoid(payload<io::GroupoidProblem>(p, "pair-groupoid"), opts);
  });

  std::string form, chart;
  for (const bool tau : {false, true}) {
    auto* sub = app.add_subcommand(tau ? "tau" : "lift", tau ? "tau of a form" : "tangent lift of a form");
    sub->add_option("--form", form, "form such as \"x1*dx1^dx2\"")->required();
    sub->add_option("--chart", chart, "coordinates such as \"x1,x2\"")->required();
    sub->callback([&, tau] { run = [&, tau] { return io::run_lift(chart, form, tau); }; });
  }

  std::string demo;
  std::string export_path;
  bool list = false;
  auto* demo_cmd = app.add_subcommand("demo", "run a built-in example end to end");
  demo_cmd->add_option("name", demo, "example name");
  demo_cmd->add_flag("--list", list, "list example names");
  demo_cmd->add_option("--export", export_path, "write the IM example as a problem file");
  demo_cmd->callback([&] {
    run = [&]() -> io::RunResult {
      if (list || demo.empty()) {
        io::RunResult r;
        r.json["command"] = "demo";
        r.json["names"] = io::demo_names();
        for (const auto& n : io::demo_names()) r.text += n + "\n";
        return r;
      }
      if (!export_path.empty()) {
        catalog::IMExample ex = [&] {
          try {
            return catalog::find_example(demo);
          } catch (const std::out_of_range&) {
            throw io::InputError("only IM examples can be exported");
          }
        }();
        std::ofstream out(export_path);
        if (!out) throw io::InputError("cannot write " + export_path);
        out << io::export_example(ex);
      }
      return io::run_demo(demo, o.apply(io::default_options()));
    };
  });

  std::size_t trials = 50;
  std::vector<std::string> suites;
  std::string suite_file;
  auto* ids = app.add_subcommand("verify-identities", "randomized exterior-calculus and tangent-lift identities");
  ids->add_option("file", suite_file, "optional identity-suite problem file");
  ids->add_option("--trials", trials, "random forms per identity");
  ids->add_option("--suite", suites, "exterior and/or tangent")->check(CLI::IsMember({"exterior", "tangent"}));
  ids->callback([&] {
    run = [&] {
      sym::CheckOptions opts = io::default_options();
      io::IdentityProblem p{{"exterior", "tangent"}, trials};
      if (!suite_file.empty()) {
        io::Problem problem = io::load_problem(suite_file);
        p = payload<io::IdentityProblem>(problem, "identity-suite");
        opts = problem.options;
        if (ids->count("--trials")) p.trials = trials;
      }
      if (!suites.empty()) p.suites = suites;
      return io::run_identities(p, o.apply(opts).seed);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return emit(run(), o);
  } catch (const io::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
}
