#include "memopt/problems/analytic.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "memopt/core/errors.hpp"

namespace memopt {

namespace {

constexpr double kBound = 5.12;

const char* kind_name(AnalyticKind kind) {
  switch (kind) {
    case AnalyticKind::sphere: return "sphere";
    case AnalyticKind::rastrigin: return "rastrigin";
    case AnalyticKind::rosenbrock: return "rosenbrock";
  }
  return "?";
}

}  // namespace

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double rastrigin(std::span<const double> x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

double rosenbrock(std::span<const double> x) {
  if (x.size() < 2) throw ContractError("rosenbrock needs at least two coordinates");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

AnalyticProblem::AnalyticProblem(AnalyticKind kind, std::size_t dim)
    : kind_(kind),
      name_(kind_name(kind)),
      space_(std::vector<double>(dim, -kBound), std::vector<double>(dim, kBound)) {
  if (dim == 0) throw ConfigError("analytic problem dimension must be positive");
  if (kind == AnalyticKind::rosenbrock && dim < 2) throw ConfigError("rosenbrock needs dim >= 2");
}

Evaluation AnalyticProblem::evaluate(std::span<const double> x) const {
  if (x.size() != space_.dim()) throw StructuralError("analytic problem: dimension mismatch");
  switch (kind_) {
    case AnalyticKind::sphere: return {sphere(x), {}};
    case AnalyticKind::rastrigin: return {rastrigin(x), {}};
    case AnalyticKind::rosenbrock: return {rosenbrock(x), {}};
  }
  return {};
}

}  // namespace memopt
