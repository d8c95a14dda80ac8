#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "memopt/core/runner.hpp"

namespace memopt::teo {

struct Params {
  double c1 = 1.0;   ///< magnitude of the random environment cooling, 0 or 1
  double c2 = 1.0;   ///< weight of the (1 - t) decay, 0 or 1
  double pro = 0.3;  ///< probability of regenerating one component per cooling agent
};

void validate(const Params& params);

/// T_i = T_min + rand (T_max - T_min), componentwise. `n` must be even and >= 2.
Population initialize(Evaluator& evaluate, const SearchSpace& space, std::size_t n,
                      RandomStream& rng);

/// beta = cost / worst_cost, with costs already shifted so the best is ~0.
double beta(double cost, double worst_cost);

/// t = iter / max_iter.
double time_fraction(std::size_t iter, std::size_t max_iter);

/// T_env' = (1 - (c1 + c2 (1 - t)) rand) T_env, one fresh draw per component.
std::vector<double> environment_cooling(std::span<const double> t_env, double t,
                                        const Params& params, RandomStream& rng);

/// T_new = T_env + (T_old - T_env) exp(-beta t).
std::vector<double> update_temperature(std::span<const double> t_old, std::span<const double> t_env,
                                       double beta, double t);

/// With probability `pro` (one draw), one uniformly chosen component is
/// regenerated within its bounds (index draw, then value draw).
std::vector<double> random_component(std::span<const double> agent, double pro,
                                     const SearchSpace& space, RandomStream& rng);

class Algorithm final : public memopt::Algorithm {
 public:
  explicit Algorithm(Params params = {});

  std::string_view name() const override { return "teo"; }
  /// Only the cooling half is re-evaluated.
  std::size_t evaluations_per_iteration(std::size_t population_size) const override {
    return population_size / 2;
  }
  void check_population_size(std::size_t population_size) const override;
  Population initialize(Evaluator& evaluate, const SearchSpace& space, std::size_t population_size,
                        RandomStream& rng) override;

  /// Sorts ascending, pairs environment agent i with cooling agent i + n/2,
  /// and moves every cooling agent. Draws per cooling agent: dim uniforms for
  /// the environment cooling, then the random-component draws.
  void step(Population& population, StepContext& ctx) override;

 private:
  Params params_;
};

}  // namespace memopt::teo
