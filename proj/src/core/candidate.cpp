#include "memopt/core/candidate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "memopt/core/errors.hpp"

namespace memopt {

double Candidate::total_violation() const {
  return std::accumulate(violations.begin(), violations.end(), 0.0);
}

void validate(const PenaltyParams& params) {
  if (!(params.exponent >= 1.0)) throw ConfigError("penalty exponent must be >= 1");
  if (!(params.scale >= 0.0)) throw ConfigError("penalty scale must be >= 0");
}

double penalized_fitness(double objective, std::span<const double> violations,
                         const PenaltyParams& params) {
  double total = 0.0;
  for (double v : violations) {
    if (v < 0.0) throw ContractError("constraint violations must be non-negative");
    total += v;
  }
  if (total == 0.0) return objective;
  return objective * std::pow(1.0 + params.scale * total, params.exponent);
}

std::size_t best_index(const Population& population) {
  if (population.empty()) throw ContractError("empty population");
  std::size_t best = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (population[i].fitness < population[best].fitness) best = i;
  }
  return best;
}

std::size_t worst_index(const Population& population) {
  if (population.empty()) throw ContractError("empty population");
  std::size_t worst = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (population[i].fitness > population[worst].fitness) worst = i;
  }
  return worst;
}

void sort_by_fitness(Population& population) {
  std::stable_sort(population.begin(), population.end(),
                   [](const Candidate& a, const Candidate& b) { return a.fitness < b.fitness; });
}

}  // namespace memopt
