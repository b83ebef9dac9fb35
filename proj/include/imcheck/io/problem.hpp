#pragma once

// TOML problem files. Every payload is validated and turned into domain
// objects before any check runs; failures raise InputError.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "imcheck/catalog/catalog.hpp"

namespace imcheck::io {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlgebroidProblem {
  std::string name;
  algebroid::LieAlgebroid algebroid;
};

struct IMProblem {
  std::string name;
  imform::IM2FormData data;
};

struct LinearFormProblem {
  algebroid::BundleCharts charts;
  cartan::KForm form;
};

struct DiracProblem {
  catalog::DiracFrame frame;
  double tolerance = 1e-8;
};

struct GroupoidProblem {
  catalog::PairGroupoid groupoid;
  cartan::KForm omega;
};

struct IdentityProblem {
  std::vector<std::string> suites;
  std::size_t trials = 50;
};

using Payload =
    std::variant<AlgebroidProblem, IMProblem, LinearFormProblem, DiracProblem, GroupoidProblem, IdentityProblem>;

struct Problem {
  std::string kind;
  sym::CheckOptions options;
  Payload payload;
};

/// Defaults for options not given in a file: IMCHECK_SEED, then 42.
sym::CheckOptions default_options();

Problem load_problem(const std::filesystem::path& path);
Problem parse_problem(std::string_view text, const std::string& origin = "<input>");

/// A problem file reproducing a catalog IM example.
std::string export_example(const catalog::IMExample& example);

}  // namespace imcheck::io
