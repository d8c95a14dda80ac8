#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "memopt/core/runner.hpp"

namespace memopt::kha {

struct Params {
  double max_induced_speed = 0.01;    ///< N^max
  double foraging_speed = 0.02;       ///< V_f
  double max_diffusion_speed = 0.005; ///< D^max
  double inertia_induced = 0.5;       ///< omega_n
  double inertia_foraging = 0.5;      ///< omega_f
  double time_constant = 0.5;         ///< C_t
  bool crossover_enabled = true;
  bool mutation_enabled = true;
  double epsilon = 1e-10;
  /// Scale the personal-best attraction by C_food as well as the food term.
  /// Turning this off gives the common variant with unit coefficient.
  bool personal_best_uses_food_coefficient = true;
};

void validate(const Params& params);

using Vector = std::vector<double>;

/// Normalized fitness difference (K_i - K_j) / (K_worst - K_best); 0 when the
/// population is flat (K_worst <= K_best).
double k_hat(double k_i, double k_j, double k_worst, double k_best);

/// Unit-ish direction (X_j - X_i) / (|X_j - X_i| + eps).
Vector x_hat(std::span<const double> x_i, std::span<const double> x_j, double eps);

/// Sensing distance of krill i: mean distance to the swarm divided by 5.
double sensing_distance(std::size_t i, const std::vector<Vector>& positions);

/// Local effect: sum of k_hat * x_hat over neighbours closer than the
/// sensing distance.
Vector local_alpha(std::size_t i, const std::vector<Vector>& positions,
                   std::span<const double> fitness, double k_worst, double k_best, double eps);

/// C = 2 (rand + g / g_max); shared form of C_best and C_food.
double effort_coefficient(double rand, std::size_t g, std::size_t g_max);

/// Target effect C_best * k_hat(i, best) * x_hat(i, best). Zero for the best itself.
Vector target_alpha(std::span<const double> x_i, double k_i, std::span<const double> best_x,
                    double best_k, double k_worst, double c_best, double eps);

/// N_i = N^max * alpha + omega_n * N_old. Writes the result back into `n_old`.
Vector induced_motion(std::span<const double> alpha, Vector& n_old, const Params& params);

/// Fitness-weighted centre of mass sum(X_i / K_i) / sum(1 / K_i). Requires
/// strictly positive fitness.
Vector food_position(const std::vector<Vector>& positions, std::span<const double> fitness);

struct ForagingInput {
  std::span<const double> x;
  double k = 0.0;
  std::span<const double> food_x;
  double food_k = 0.0;
  std::span<const double> personal_best_x;
  double personal_best_k = 0.0;
  double k_worst = 0.0;
  double k_best = 0.0;
  double c_food = 0.0;
};

/// F_i = V_f * beta_i + omega_f * F_old with beta = beta_food + beta_best.
/// Writes the result back into `f_old`.
Vector foraging(const ForagingInput& in, Vector& f_old, const Params& params);

/// D = D^max (1 - g / g_max) * delta with delta uniform on [-1, 1]^dim
/// (one draw per component).
Vector diffusion(std::size_t dim, std::size_t g, std::size_t g_max, RandomStream& rng,
                 const Params& params);

/// Delta t = C_t * sum_j (ub_j - lb_j).
double delta_t(const SearchSpace& space, const Params& params);

/// x + dt * (N + F + D), then projected onto the bounds.
Vector update_position(std::span<const double> x, std::span<const double> n,
                       std::span<const double> f, std::span<const double> d, double dt,
                       const SearchSpace& space);

/// Crossover / mutation probability 0.05 / k_hat capped to [0, 1]; 1 when k_hat <= 0.
double operator_probability(double k_hat_best);

/// Per dimension, with probability C_R copy the coordinate from one donor
/// r1 != i. The global best is returned unchanged without consuming draws.
/// Draws: donor index, then one uniform per dimension.
/// `self`, when given, replaces positions[i] as the vector being modified.
Vector crossover(std::size_t i, const std::vector<Vector>& positions, bool is_global_best,
                 double k_hat_best, RandomStream& rng, std::span<const double> self = {});

/// Per dimension, with probability Mu set X_best + mu (X_r2 - X_r3) with
/// distinct r2, r3, i. Skipped for the global best and when fewer than three
/// krill exist. Draws: r2, r3, then one uniform per dimension.
Vector mutation(std::size_t i, const std::vector<Vector>& positions, std::span<const double> best_x,
                bool is_global_best, double k_hat_best, double mu, RandomStream& rng,
                std::span<const double> self = {});

/// Memory of the herd between iterations.
struct State {
  std::vector<Vector> induced;   ///< N_old per krill
  std::vector<Vector> foraging;  ///< F_old per krill
  Population personal_best;
  Candidate global_best;
  bool initialized = false;
};

class Algorithm final : public memopt::Algorithm {
 public:
  explicit Algorithm(Params params = {});

  std::string_view name() const override { return "kha"; }
  std::size_t evaluations_per_iteration(std::size_t population_size) const override {
    return population_size;
  }

  /// Per krill, in index order: rand for C_best, rand for C_food, dim draws
  /// for diffusion, then crossover draws, then mu and mutation draws.
  void step(Population& population, StepContext& ctx) override;

  const State& state() const noexcept { return state_; }

 private:
  void absorb(const Population& population);

  Params params_;
  State state_;
};

}  // namespace memopt::kha
