#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memopt/core/candidate.hpp"
#include "memopt/core/elite_memory.hpp"
#include "memopt/core/problem.hpp"
#include "memopt/core/random.hpp"

namespace memopt {

/// Run-local objective wrapper. Every call counts one evaluation, turns the
/// raw result into a penalized Candidate, offers it to the elite memory (if
/// any) and tracks the best candidate seen.
class Evaluator {
 public:
  Evaluator(const Problem& problem, PenaltyParams penalty, EliteMemory* memory = nullptr);

  /// Throws EvaluationError if the objective or a violation is not finite.
  Candidate operator()(std::vector<double> position);

  std::size_t nfes() const noexcept { return nfes_; }
  const std::optional<Candidate>& best() const noexcept { return best_; }
  const Problem& problem() const noexcept { return problem_; }

 private:
  const Problem& problem_;
  PenaltyParams penalty_;
  EliteMemory* memory_;
  std::size_t nfes_ = 0;
  std::optional<Candidate> best_;
};

/// Everything a step operator needs besides the population.
struct StepContext {
  Evaluator& evaluate;
  RandomStream& rng;
  const SearchSpace& space;
  std::size_t iteration;       ///< 1-based index of the iteration being executed
  std::size_t max_iterations;
};

/// A population-based metaheuristic. Instances carry per-run state and are
/// created fresh for every run.
class Algorithm {
 public:
  virtual ~Algorithm() = default;

  virtual std::string_view name() const = 0;

  /// Objective evaluations performed by one call to `step`.
  virtual std::size_t evaluations_per_iteration(std::size_t population_size) const = 0;

  /// Rejects population sizes the algorithm cannot work with.
  virtual void check_population_size(std::size_t population_size) const;

  /// Uniform random initialization inside the bounds (one evaluation per member).
  virtual Population initialize(Evaluator& evaluate, const SearchSpace& space,
                                std::size_t population_size, RandomStream& rng);

  virtual void step(Population& population, StepContext& ctx) = 0;
};

struct RunConfig {
  std::size_t population_size = 50;
  std::size_t max_iterations = 100;
  bool memory_enabled = true;
  double memory_fraction = 0.2;
  std::uint64_t seed = 0;
  std::size_t replicate_count = 20;
  PenaltyParams penalty{};
};

void validate(const RunConfig& config);

struct HistoryPoint {
  std::size_t iteration = 0;
  double best_so_far = 0.0;
  std::size_t nfes = 0;
};

struct RunResult {
  Candidate best;
  std::vector<HistoryPoint> history;
  std::size_t nfes = 0;
  /// Evaluations the algorithm declared per iteration; the run loop checks
  /// the instrumented counter against it every iteration.
  std::size_t declared_evaluations_per_iteration = 0;
};

/// Seeded run: initialize, then per iteration step, inject elites (when the
/// memory is enabled) and record the best-so-far. The Rng is seeded from
/// `config.seed`; identical inputs give bit-identical results.
RunResult run(Algorithm& algorithm, const Problem& problem, const RunConfig& config);

/// Same, with a caller-supplied random stream.
RunResult run(Algorithm& algorithm, const Problem& problem, const RunConfig& config,
              RandomStream& rng);

/// Iterations that keep a run within `nfe_budget` evaluations, counting the
/// initial population.
std::size_t iterations_for_budget(const Algorithm& algorithm, std::size_t population_size,
                                  std::size_t nfe_budget);

struct ReplicateStats {
  double best = 0.0;
  double mean = 0.0;
  double worst = 0.0;
  double std = 0.0;  ///< sample standard deviation, 0 for a single run
  double nfes_median = 0.0;
  std::size_t runs = 0;
};

ReplicateStats replicate_stats(std::span<const double> final_bests, std::span<const double> nfes);
ReplicateStats replicate_stats(std::span<const RunResult> results);

}  // namespace memopt
