#include "imcheck/symexpr/compiled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace imcheck::sym {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double int_power(double x, int e) {
  if (e < 0) return 1.0 / int_power(x, -e);
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    e >>= 1;
    if (e > 0) x *= x;
  }
  return r;
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<std::string>& vars) {
  std::vector<std::string> seen_keys;
  for (const auto& t : e.terms()) {
    Term ct{t.coeff.to_double(), {}};
    for (const auto& f : t.factors) {
      auto it = std::find(seen_keys.begin(), seen_keys.end(), f.atom->key);
      int node;
      if (it == seen_keys.end()) {
        node = add_node(*f.atom, vars);
        seen_keys.push_back(f.atom->key);
      } else {
        node = static_cast<int>(it - seen_keys.begin());
      }
      ct.factors.push_back({node, f.exponent});
    }
    terms_.push_back(std::move(ct));
  }
}

int CompiledExpr::add_node(const AtomData& atom, const std::vector<std::string>& vars) {
  Node n{};
  switch (atom.kind) {
    case AtomData::Kind::Variable: {
      auto it = std::find(vars.begin(), vars.end(), atom.name);
      if (it == vars.end()) throw std::invalid_argument("variable '" + atom.name + "' is not bound");
      n.kind = Node::Kind::Variable;
      n.var = static_cast<int>(it - vars.begin());
      break;
    }
    case AtomData::Kind::Function:
      n.kind = Node::Kind::Function;
      n.function = atom.function;
      n.child = static_cast<int>(subprograms_.size());
      subprograms_.emplace_back(atom.argument, vars);
      break;
    case AtomData::Kind::Root:
      n.kind = Node::Kind::Root;
      n.root_index = atom.root_index;
      n.child = static_cast<int>(subprograms_.size());
      subprograms_.emplace_back(atom.argument, vars);
      break;
  }
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

double CompiledExpr::operator()(std::span<const double> values) const {
  // Small fixed buffer covers the common case without allocation.
  double local[16];
  std::vector<double> heap;
  double* atom_values = local;
  if (nodes_.size() > 16) {
    heap.resize(nodes_.size());
    atom_values = heap.data();
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    double v = 0.0;
    switch (n.kind) {
      case Node::Kind::Variable:
        v = values[static_cast<std::size_t>(n.var)];
        break;
      case Node::Kind::Function: {
        double x = subprograms_[static_cast<std::size_t>(n.child)](values);
        switch (n.function) {
          case Function::Sin:
            v = std::sin(x);
            break;
          case Function::Cos:
            v = std::cos(x);
            break;
          case Function::Exp:
            v = std::exp(x);
            break;
          case Function::Log:
            v = x > 0 ? std::log(x) : kNaN;
            break;
        }
        break;
      }
      case Node::Kind::Root: {
        double x = subprograms_[static_cast<std::size_t>(n.child)](values);
        if (n.root_index == 1)
          v = x;
        else if (x >= 0)
          v = std::pow(x, 1.0 / n.root_index);
        else
          v = n.root_index % 2 == 1 ? -std::pow(-x, 1.0 / n.root_index) : kNaN;
        break;
      }
    }
    atom_values[i] = v;
  }
  double sum = 0.0;
  for (const auto& t : terms_) {
    double p = t.coeff;
    for (const auto& f : t.factors) {
      double a = atom_values[f.node];
      if (f.exponent < 0 && a == 0.0) return kNaN;
      p *= int_power(a, f.exponent);
    }
    sum += p;
  }
  return std::isfinite(sum) ? sum : kNaN;
}

}  // namespace imcheck::sym
