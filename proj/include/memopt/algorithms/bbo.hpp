#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "memopt/core/runner.hpp"

namespace memopt::bbo {

struct Params {
  double max_immigration = 1.0;  ///< I
  double max_emigration = 1.0;   ///< E
  double max_mutation = 0.01;    ///< m_max
  std::size_t elite_keep = 2;    ///< habitats protected by BBO's own elitism
};

void validate(const Params& params);

struct Rates {
  double immigration = 0.0;  ///< lambda
  double emigration = 0.0;   ///< mu
};

/// Linear migration model for the habitat at `rank` (0 = best) in a
/// population of `n`. The species count is n - 1 - rank, so the best habitat
/// has the highest emigration and lowest immigration rate.
Rates rates(std::size_t rank, std::size_t n, const Params& params);

/// Species-count probability for `rank`: a tent peaking at the median
/// species count and falling linearly towards both extremes.
double species_probability(std::size_t rank, std::size_t n);

/// m = m_max * (1 - p / p_max).
double mutation_rate(double p, double p_max, const Params& params);

/// Migration over positions. For each habitat i and SIV j, with probability
/// lambda_i the SIV is copied from a donor k != i chosen by roulette wheel on
/// mu (uniformly when every other mu is zero). Donors are read from the
/// pre-migration positions.
///
/// Random draws, per habitat then per SIV: one uniform for the immigration
/// test and, if it passes, one uniform for the roulette wheel.
std::vector<std::vector<double>> migrate(const std::vector<std::vector<double>>& positions,
                                         std::span<const double> immigration,
                                         std::span<const double> emigration, RandomStream& rng);

/// Each SIV is resampled uniformly within its bounds with probability `rate`.
/// Draws: one uniform per SIV for the test, plus one for the new value.
std::vector<double> mutate(std::span<const double> habitat, double rate, const SearchSpace& space,
                           RandomStream& rng);

class Algorithm final : public memopt::Algorithm {
 public:
  explicit Algorithm(Params params = {});

  std::string_view name() const override { return "bbo"; }
  std::size_t evaluations_per_iteration(std::size_t population_size) const override {
    return population_size;
  }
  void step(Population& population, StepContext& ctx) override;

  const Params& params() const noexcept { return params_; }

 private:
  Params params_;
};

}  // namespace memopt::bbo
