#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "memopt/core/problem.hpp"

namespace memopt {

enum class AnalyticKind { sphere, rastrigin, rosenbrock };

/// Unconstrained test function over [-5.12, 5.12]^dim. The minimum is 0, at
/// the origin for sphere and Rastrigin and at (1, ..., 1) for Rosenbrock.
class AnalyticProblem final : public Problem {
 public:
  AnalyticProblem(AnalyticKind kind, std::size_t dim);

  const std::string& name() const override { return name_; }
  const SearchSpace& space() const override { return space_; }
  Evaluation evaluate(std::span<const double> x) const override;

  AnalyticKind kind() const noexcept { return kind_; }

 private:
  AnalyticKind kind_;
  std::string name_;
  SearchSpace space_;
};

double sphere(std::span<const double> x);
double rastrigin(std::span<const double> x);
/// Requires at least two coordinates.
double rosenbrock(std::span<const double> x);

}  // namespace memopt
