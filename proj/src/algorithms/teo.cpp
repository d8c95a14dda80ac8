#include "memopt/algorithms/teo.hpp"

#include <algorithm>
#include <cmath>

#include "memopt/core/errors.hpp"

namespace memopt::teo {

namespace {

constexpr double kShiftGuard = 1e-10;

bool is_binary(double v) { return v == 0.0 || v == 1.0; }

}  // namespace

void validate(const Params& params) {
  if (!is_binary(params.c1) || !is_binary(params.c2)) throw ConfigError("teo: c1 and c2 must be 0 or 1");
  if (!(params.pro > 0.0 && params.pro < 1.0)) throw ConfigError("teo: pro must be in (0, 1)");
}

Population initialize(Evaluator& evaluate, const SearchSpace& space, std::size_t n,
                      RandomStream& rng) {
  if (n < 2 || n % 2 != 0) throw ConfigError("teo: population size must be even and >= 2");
  Population pop;
  pop.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> t(space.dim());
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = space.lower()[j] + rng.uniform() * space.width(j);
    pop.push_back(evaluate(std::move(t)));
  }
  return pop;
}

double beta(double cost, double worst_cost) {
  if (worst_cost == 0.0) throw ContractError("teo: worst cost is zero after shifting");
  return cost / worst_cost;
}

double time_fraction(std::size_t iter, std::size_t max_iter) {
  if (max_iter == 0) throw ContractError("teo: max_iter must be positive");
  if (iter > max_iter) throw ContractError("teo: iteration beyond max_iter");
  return static_cast<double>(iter) / static_cast<double>(max_iter);
}

std::vector<double> environment_cooling(std::span<const double> t_env, double t,
                                        const Params& params, RandomStream& rng) {
  const double c = params.c1 + params.c2 * (1.0 - t);
  std::vector<double> out(t_env.begin(), t_env.end());
  for (double& v : out) v *= 1.0 - c * rng.uniform();
  return out;
}

std::vector<double> update_temperature(std::span<const double> t_old, std::span<const double> t_env,
                                       double beta, double t) {
  const double decay = std::exp(-beta * t);
  std::vector<double> out(t_old.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = t_env[j] + (t_old[j] - t_env[j]) * decay;
  return out;
}

std::vector<double> random_component(std::span<const double> agent, double pro,
                                     const SearchSpace& space, RandomStream& rng) {
  std::vector<double> out(agent.begin(), agent.end());
  if (!(rng.uniform() < pro)) return out;
  const std::size_t j = rng.index(out.size());
  out[j] = space.lower()[j] + rng.uniform() * space.width(j);
  return out;
}

Algorithm::Algorithm(Params params) : params_(params) { validate(params_); }

void Algorithm::check_population_size(std::size_t population_size) const {
  if (population_size < 2 || population_size % 2 != 0) {
    throw ConfigError("teo: population size must be even and >= 2");
  }
}

Population Algorithm::initialize(Evaluator& evaluate, const SearchSpace& space,
                                 std::size_t population_size, RandomStream& rng) {
  return teo::initialize(evaluate, space, population_size, rng);
}

void Algorithm::step(Population& population, StepContext& ctx) {
  sort_by_fitness(population);
  const std::size_t n = population.size();
  const std::size_t half = n / 2;

  const double best = population.front().fitness;
  const double worst_shifted = population.back().fitness - best + kShiftGuard;
  const double t = time_fraction(ctx.iteration, ctx.max_iterations);

  for (std::size_t i = 0; i < half; ++i) {
    const Candidate& env = population[i];
    Candidate& cooling = population[half + i];
    const double b = beta(cooling.fitness - best + kShiftGuard, worst_shifted);
    const auto t_env = environment_cooling(env.position, t, params_, ctx.rng);
    auto moved = update_temperature(cooling.position, t_env, b, t);
    moved = random_component(moved, params_.pro, ctx.space, ctx.rng);
    cooling = ctx.evaluate(clamp_to_bounds(moved, ctx.space));
  }
}

}  // namespace memopt::teo
