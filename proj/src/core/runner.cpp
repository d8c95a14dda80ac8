#include "memopt/core/runner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "memopt/core/errors.hpp"

namespace memopt {

namespace {

std::string describe(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t j = 0; j < x.size(); ++j) os << (j ? ", " : "") << x[j];
  os << ']';
  return os.str();
}

}  // namespace

Evaluator::Evaluator(const Problem& problem, PenaltyParams penalty, EliteMemory* memory)
    : problem_(problem), penalty_(penalty), memory_(memory) {}

Candidate Evaluator::operator()(std::vector<double> position) {
  Evaluation raw = problem_.evaluate(position);
  ++nfes_;
  bool finite = std::isfinite(raw.objective);
  for (double v : raw.violations) finite = finite && std::isfinite(v);
  if (!finite) {
    throw EvaluationError("non-finite objective for candidate " + describe(position) +
                          " on problem " + problem_.name());
  }
  Candidate c;
  c.fitness = penalized_fitness(raw.objective, raw.violations, penalty_);
  c.position = std::move(position);
  c.objective = raw.objective;
  c.violations = std::move(raw.violations);
  if (!std::isfinite(c.fitness)) {
    throw EvaluationError("non-finite penalized fitness for candidate " + describe(c.position));
  }
  if (memory_) memory_->update(c);
  if (!best_ || c.fitness < best_->fitness) best_ = c;
  return c;
}

void Algorithm::check_population_size(std::size_t population_size) const {
  if (population_size == 0) throw ConfigError("population_size must be positive");
}

Population Algorithm::initialize(Evaluator& evaluate, const SearchSpace& space,
                                 std::size_t population_size, RandomStream& rng) {
  Population pop;
  pop.reserve(population_size);
  for (std::size_t i = 0; i < population_size; ++i) {
    std::vector<double> x(space.dim());
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] = space.lower()[j] + rng.uniform() * space.width(j);
    }
    pop.push_back(evaluate(std::move(x)));
  }
  return pop;
}

void validate(const RunConfig& config) {
  if (config.population_size == 0) throw ConfigError("population_size must be positive");
  if (config.max_iterations == 0) throw ConfigError("max_iterations must be positive");
  if (config.replicate_count == 0) throw ConfigError("replicates must be positive");
  validate(config.penalty);
  if (config.memory_enabled) {
    if (!(config.memory_fraction > 0.0 && config.memory_fraction <= 1.0)) {
      throw ConfigError("memory_fraction must be in (0, 1]");
    }
  }
}

RunResult run(Algorithm& algorithm, const Problem& problem, const RunConfig& config) {
  Rng rng(config.seed);
  return run(algorithm, problem, config, rng);
}

RunResult run(Algorithm& algorithm, const Problem& problem, const RunConfig& config,
              RandomStream& rng) {
  validate(config);
  algorithm.check_population_size(config.population_size);

  std::optional<EliteMemory> memory;
  if (config.memory_enabled) {
    memory.emplace(memory_capacity(config.population_size, config.memory_fraction));
  }
  Evaluator evaluate(problem, config.penalty, memory ? &*memory : nullptr);
  const SearchSpace& space = problem.space();

  RunResult result;
  result.declared_evaluations_per_iteration =
      algorithm.evaluations_per_iteration(config.population_size);

  Population pop = algorithm.initialize(evaluate, space, config.population_size, rng);
  if (pop.size() != config.population_size || evaluate.nfes() != config.population_size) {
    throw std::logic_error(std::string(algorithm.name()) + ": initialization contract broken");
  }
  result.history.push_back({0, evaluate.best()->fitness, evaluate.nfes()});

  for (std::size_t g = 1; g <= config.max_iterations; ++g) {
    const std::size_t before = evaluate.nfes();
    StepContext ctx{evaluate, rng, space, g, config.max_iterations};
    algorithm.step(pop, ctx);
    if (evaluate.nfes() - before != result.declared_evaluations_per_iteration) {
      throw std::logic_error(std::string(algorithm.name()) + ": performed " +
                             std::to_string(evaluate.nfes() - before) +
                             " evaluations, declared " +
                             std::to_string(result.declared_evaluations_per_iteration));
    }
    if (pop.size() != config.population_size) {
      throw std::logic_error(std::string(algorithm.name()) + ": population size changed");
    }
    if (memory) memory_inject(pop, *memory);
    result.history.push_back({g, evaluate.best()->fitness, evaluate.nfes()});
  }

  result.best = *evaluate.best();
  result.nfes = evaluate.nfes();
  return result;
}

std::size_t iterations_for_budget(const Algorithm& algorithm, std::size_t population_size,
                                  std::size_t nfe_budget) {
  const std::size_t per_iteration = algorithm.evaluations_per_iteration(population_size);
  if (nfe_budget < population_size + per_iteration) {
    throw ConfigError("NFE budget too small for one iteration");
  }
  return (nfe_budget - population_size) / per_iteration;
}

ReplicateStats replicate_stats(std::span<const double> final_bests, std::span<const double> nfes) {
  if (final_bests.empty()) throw ContractError("replicate_stats needs at least one result");
  if (nfes.size() != final_bests.size()) throw StructuralError("nfes and bests differ in length");
  ReplicateStats s;
  s.runs = final_bests.size();
  s.best = *std::min_element(final_bests.begin(), final_bests.end());
  s.worst = *std::max_element(final_bests.begin(), final_bests.end());
  const double n = static_cast<double>(s.runs);
  s.mean = std::accumulate(final_bests.begin(), final_bests.end(), 0.0) / n;
  if (s.runs > 1) {
    double ss = 0.0;
    for (double b : final_bests) ss += (b - s.mean) * (b - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  std::vector<double> sorted(nfes.begin(), nfes.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.nfes_median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

ReplicateStats replicate_stats(std::span<const RunResult> results) {
  std::vector<double> bests;
  std::vector<double> nfes;
  for (const auto& r : results) {
    bests.push_back(r.best.fitness);
    nfes.push_back(static_cast<double>(r.nfes));
  }
  return replicate_stats(bests, nfes);
}

}  // namespace memopt
