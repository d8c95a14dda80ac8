#pragma once

#include <span>
#include <vector>

namespace memopt {

/// One evaluated design: position, raw objective, normalized constraint
/// violations (0 = satisfied) and the penalized fitness used for ranking.
struct Candidate {
  std::vector<double> position;
  double objective = 0.0;
  std::vector<double> violations;
  double fitness = 0.0;

  double total_violation() const;
  bool feasible() const { return total_violation() == 0.0; }
};

using Population = std::vector<Candidate>;

/// Multiplicative penalty: fitness = objective * (1 + scale * sum(v))^exponent.
struct PenaltyParams {
  double exponent = 2.0;
  double scale = 1.0;
};

void validate(const PenaltyParams& params);

double penalized_fitness(double objective, std::span<const double> violations,
                         const PenaltyParams& params);

/// Normalized violation of an upper-bound constraint value <= limit.
inline double upper_bound_violation(double value, double limit) {
  const double v = value / limit - 1.0;
  return v > 0.0 ? v : 0.0;
}

/// Index of the lowest-fitness member; ties go to the lower index.
std::size_t best_index(const Population& population);

/// Index of the highest-fitness member; ties go to the lower index.
std::size_t worst_index(const Population& population);

/// Stable ascending sort by fitness (equal fitness keeps index order).
void sort_by_fitness(Population& population);

}  // namespace memopt
