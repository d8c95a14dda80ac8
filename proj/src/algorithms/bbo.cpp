#include "memopt/algorithms/bbo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "memopt/core/errors.hpp"

namespace memopt::bbo {

void validate(const Params& params) {
  if (!(params.max_immigration > 0.0)) throw ConfigError("bbo: max_immigration must be > 0");
  if (!(params.max_emigration > 0.0)) throw ConfigError("bbo: max_emigration must be > 0");
  if (!(params.max_mutation >= 0.0 && params.max_mutation <= 1.0)) {
    throw ConfigError("bbo: max_mutation must be in [0, 1]");
  }
}

Rates rates(std::size_t rank, std::size_t n, const Params& params) {
  if (n == 0 || rank >= n) throw ContractError("bbo: rank out of range");
  const double species = static_cast<double>(n - 1 - rank);
  const double fraction = species / static_cast<double>(n);
  return {params.max_immigration * (1.0 - fraction), params.max_emigration * fraction};
}

double species_probability(std::size_t rank, std::size_t n) {
  if (n == 0 || rank >= n) throw ContractError("bbo: rank out of range");
  const double centre = 0.5 * static_cast<double>(n - 1);
  const double species = static_cast<double>(n - 1 - rank);
  return 1.0 - std::abs(species - centre) / (centre + 1.0);
}

double mutation_rate(double p, double p_max, const Params& params) {
  if (!(p_max > 0.0)) throw ContractError("bbo: p_max must be positive");
  if (p < 0.0 || p > p_max) throw ContractError("bbo: p must lie in [0, p_max]");
  return params.max_mutation * (1.0 - p / p_max);
}

std::vector<std::vector<double>> migrate(const std::vector<std::vector<double>>& positions,
                                         std::span<const double> immigration,
                                         std::span<const double> emigration, RandomStream& rng) {
  const std::size_t n = positions.size();
  if (immigration.size() != n || emigration.size() != n) {
    throw StructuralError("bbo: rate vectors must match the population size");
  }
  std::vector<std::vector<double>> out = positions;
  if (n < 2) return out;

  for (std::size_t i = 0; i < n; ++i) {
    double mass = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i) mass += emigration[k];
    }
    for (std::size_t j = 0; j < positions[i].size(); ++j) {
      if (!(rng.uniform() < immigration[i])) continue;
      const double spin = rng.uniform();
      std::size_t donor = n;
      if (mass > 0.0) {
        double acc = 0.0;
        const double target = spin * mass;
        std::size_t last = n;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || emigration[k] <= 0.0) continue;
          last = k;
          acc += emigration[k];
          if (target < acc) {
            donor = k;
            break;
          }
        }
        if (donor == n) donor = last;  // rounding at the top of the wheel
      } else {
        // Degenerate wheel: uniform over the other habitats.
        std::size_t pick = std::min(static_cast<std::size_t>(spin * static_cast<double>(n - 1)), n - 2);
        donor = pick < i ? pick : pick + 1;
      }
      out[i][j] = positions[donor][j];
    }
  }
  return out;
}

std::vector<double> mutate(std::span<const double> habitat, double rate, const SearchSpace& space,
                           RandomStream& rng) {
  if (habitat.size() != space.dim()) throw StructuralError("bbo: habitat dimension mismatch");
  std::vector<double> out(habitat.begin(), habitat.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (rng.uniform() < rate) out[j] = space.lower()[j] + rng.uniform() * space.width(j);
  }
  return out;
}

Algorithm::Algorithm(Params params) : params_(params) { validate(params_); }

void Algorithm::step(Population& population, StepContext& ctx) {
  const std::size_t n = population.size();
  sort_by_fitness(population);

  const std::size_t keep = std::min(params_.elite_keep, n);
  const Population elites(population.begin(), population.begin() + static_cast<std::ptrdiff_t>(keep));

  std::vector<double> immigration(n);
  std::vector<double> emigration(n);
  std::vector<double> probability(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const Rates r = rates(rank, n, params_);
    immigration[rank] = r.immigration;
    emigration[rank] = r.emigration;
    probability[rank] = species_probability(rank, n);
  }
  const double p_max = *std::max_element(probability.begin(), probability.end());

  std::vector<std::vector<double>> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = population[i].position;
  positions = migrate(positions, immigration, emigration, ctx.rng);

  for (std::size_t i = keep; i < n; ++i) {
    const double rate = mutation_rate(probability[i], p_max, params_);
    positions[i] = mutate(positions[i], rate, ctx.space, ctx.rng);
  }

  for (std::size_t i = 0; i < n; ++i) {
    population[i] = ctx.evaluate(clamp_to_bounds(positions[i], ctx.space));
  }

  // Elitism: the pre-step elites replace the same number of worst habitats.
  sort_by_fitness(population);
  for (std::size_t k = 0; k < keep; ++k) population[n - 1 - k] = elites[k];
  sort_by_fitness(population);
}

}  // namespace memopt::bbo
