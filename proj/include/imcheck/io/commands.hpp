#pragma once

// One function per CLI subcommand. Each returns the JSON report, a text
// rendering, and the combined verdict that decides the exit status.

#include <string>

#include "imcheck/io/problem.hpp"
#include "json.hpp"

namespace imcheck::io {

using Json = nlohmann::ordered_json;

struct RunResult {
  Json json;
  std::string text;
  sym::Verdict verdict = sym::Verdict::Pass;
};

/// 0 pass, 1 fail, 3 inconclusive. Input errors (2) never reach a RunResult.
int exit_code(sym::Verdict verdict);

Json to_json(const sym::CheckOutcome& outcome);
Json to_json(const sym::NamedCheck& check);

/// Axioms of the algebroid and of its two prolongations, plus random triples.
RunResult run_check_algebroid(const AlgebroidProblem& problem, const sym::CheckOptions& opts, std::size_t triples = 20);
RunResult run_check_im(const IMProblem& problem, const sym::CheckOptions& opts);
RunResult run_check_morphism(const IMProblem& problem, const sym::CheckOptions& opts);
RunResult run_build_lambda(const IMProblem& problem, const sym::CheckOptions& opts);
RunResult run_analyze_linear(const LinearFormProblem& problem, const sym::CheckOptions& opts);
RunResult run_check_dirac(const DiracProblem& problem, const sym::CheckOptions& opts);
RunResult run_check_groupoid(const GroupoidProblem& problem, const sym::CheckOptions& opts);
RunResult run_identities(const IdentityProblem& problem, std::uint64_t seed);
/// α_T or τ(α) of a form given as text on a chart given as "x1,x2".
RunResult run_lift(std::string_view chart, std::string_view form, bool tau);
/// A catalog IM or Dirac example end to end. Throws InputError for unknown names.
RunResult run_demo(std::string_view name, const sym::CheckOptions& opts);
/// Names accepted by run_demo.
std::vector<std::string> demo_names();

}  // namespace imcheck::io
