#pragma once

#include <span>
#include <string>
#include <vector>

#include "memopt/core/search_space.hpp"

namespace memopt {

/// Raw result of one objective evaluation.
struct Evaluation {
  double objective = 0.0;
  std::vector<double> violations;
};

/// A minimization problem. Implementations are immutable after construction
/// and `evaluate` is pure, so one instance can be shared by concurrent runs.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual const std::string& name() const = 0;
  virtual const SearchSpace& space() const = 0;
  virtual Evaluation evaluate(std::span<const double> x) const = 0;

  /// The design actually analysed for `x` (e.g. snapped to a discrete grid).
  /// Defaults to `x` itself.
  virtual std::vector<double> decode(std::span<const double> x) const {
    return {x.begin(), x.end()};
  }
};

}  // namespace memopt
