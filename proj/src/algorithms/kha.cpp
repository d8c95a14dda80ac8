#include "memopt/algorithms/kha.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "memopt/core/errors.hpp"

namespace memopt::kha {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

void axpy(Vector& y, double a, std::span<const double> x) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

// Shift used for the food centre when some fitness is not positive.
constexpr double kShiftGuard = 1e-10;

}  // namespace

void validate(const Params& p) {
  if (!(p.max_induced_speed >= 0.0 && p.foraging_speed >= 0.0 && p.max_diffusion_speed >= 0.0)) {
    throw ConfigError("kha: speeds must be non-negative");
  }
  if (!(p.inertia_induced >= 0.0 && p.inertia_induced <= 1.0 && p.inertia_foraging >= 0.0 &&
        p.inertia_foraging <= 1.0)) {
    throw ConfigError("kha: inertia weights must be in [0, 1]");
  }
  if (!(p.time_constant > 0.0 && p.time_constant <= 2.0)) {
    throw ConfigError("kha: time_constant must be in (0, 2]");
  }
  if (!(p.epsilon > 0.0)) throw ConfigError("kha: epsilon must be positive");
}

double k_hat(double k_i, double k_j, double k_worst, double k_best) {
  const double range = k_worst - k_best;
  if (!(range > 0.0)) return 0.0;
  return (k_i - k_j) / range;
}

Vector x_hat(std::span<const double> x_i, std::span<const double> x_j, double eps) {
  const double norm = distance(x_i, x_j) + eps;
  Vector out(x_i.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (x_j[j] - x_i[j]) / norm;
  return out;
}

double sensing_distance(std::size_t i, const std::vector<Vector>& positions) {
  double sum = 0.0;
  for (const auto& x : positions) sum += distance(positions[i], x);
  return sum / (5.0 * static_cast<double>(positions.size()));
}

Vector local_alpha(std::size_t i, const std::vector<Vector>& positions,
                   std::span<const double> fitness, double k_worst, double k_best, double eps) {
  Vector alpha(positions[i].size(), 0.0);
  const double d = sensing_distance(i, positions);
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j == i || !(distance(positions[i], positions[j]) < d)) continue;
    const double kh = k_hat(fitness[i], fitness[j], k_worst, k_best);
    if (kh == 0.0) continue;
    axpy(alpha, kh, x_hat(positions[i], positions[j], eps));
  }
  return alpha;
}

double effort_coefficient(double rand, std::size_t g, std::size_t g_max) {
  if (g_max == 0) throw ContractError("kha: g_max must be positive");
  return 2.0 * (rand + static_cast<double>(g) / static_cast<double>(g_max));
}

Vector target_alpha(std::span<const double> x_i, double k_i, std::span<const double> best_x,
                    double best_k, double k_worst, double c_best, double eps) {
  Vector alpha = x_hat(x_i, best_x, eps);
  const double scale = c_best * k_hat(k_i, best_k, k_worst, best_k);
  for (double& a : alpha) a *= scale;
  return alpha;
}

Vector induced_motion(std::span<const double> alpha, Vector& n_old, const Params& params) {
  Vector n(alpha.size());
  for (std::size_t j = 0; j < n.size(); ++j) {
    n[j] = params.max_induced_speed * alpha[j] + params.inertia_induced * n_old[j];
  }
  n_old = n;
  return n;
}

Vector food_position(const std::vector<Vector>& positions, std::span<const double> fitness) {
  if (positions.empty()) throw ContractError("kha: empty swarm");
  Vector food(positions.front().size(), 0.0);
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!(fitness[i] > 0.0)) throw ContractError("kha: food centre needs positive fitness");
    const double w = 1.0 / fitness[i];
    axpy(food, w, positions[i]);
    weight_sum += w;
  }
  for (double& v : food) v /= weight_sum;
  return food;
}

Vector foraging(const ForagingInput& in, Vector& f_old, const Params& params) {
  const double eps = params.epsilon;
  Vector beta = x_hat(in.x, in.food_x, eps);
  const double food_scale = in.c_food * k_hat(in.k, in.food_k, in.k_worst, in.k_best);
  for (double& b : beta) b *= food_scale;

  const double best_coeff = params.personal_best_uses_food_coefficient ? in.c_food : 1.0;
  const double best_scale = best_coeff * k_hat(in.k, in.personal_best_k, in.k_worst, in.k_best);
  if (best_scale != 0.0) axpy(beta, best_scale, x_hat(in.x, in.personal_best_x, eps));

  Vector f(beta.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    f[j] = params.foraging_speed * beta[j] + params.inertia_foraging * f_old[j];
  }
  f_old = f;
  return f;
}

Vector diffusion(std::size_t dim, std::size_t g, std::size_t g_max, RandomStream& rng,
                 const Params& params) {
  if (g_max == 0) throw ContractError("kha: g_max must be positive");
  const double amplitude =
      params.max_diffusion_speed * (1.0 - static_cast<double>(g) / static_cast<double>(g_max));
  Vector d(dim);
  for (double& v : d) v = amplitude * (2.0 * rng.uniform() - 1.0);
  return d;
}

double delta_t(const SearchSpace& space, const Params& params) {
  double sum = 0.0;
  for (std::size_t j = 0; j < space.dim(); ++j) sum += space.width(j);
  return params.time_constant * sum;
}

Vector update_position(std::span<const double> x, std::span<const double> n,
                       std::span<const double> f, std::span<const double> d, double dt,
                       const SearchSpace& space) {
  Vector out(x.begin(), x.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += dt * (n[j] + f[j] + d[j]);
  return clamp_to_bounds(out, space);
}

double operator_probability(double k_hat_best) {
  if (!(k_hat_best > 0.0)) return 1.0;
  return std::min(1.0, 0.05 / k_hat_best);
}

Vector crossover(std::size_t i, const std::vector<Vector>& positions, bool is_global_best,
                 double k_hat_best, RandomStream& rng, std::span<const double> self) {
  Vector out = self.empty() ? positions[i] : Vector(self.begin(), self.end());
  if (is_global_best || positions.size() < 2) return out;
  const double cr = operator_probability(k_hat_best);
  std::size_t r1 = rng.index(positions.size() - 1);
  if (r1 >= i) ++r1;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (rng.uniform() < cr) out[j] = positions[r1][j];
  }
  return out;
}

Vector mutation(std::size_t i, const std::vector<Vector>& positions, std::span<const double> best_x,
                bool is_global_best, double k_hat_best, double mu, RandomStream& rng,
                std::span<const double> self) {
  Vector out = self.empty() ? positions[i] : Vector(self.begin(), self.end());
  const std::size_t n = positions.size();
  if (is_global_best || n < 3) return out;
  const double prob = operator_probability(k_hat_best);
  // r2 from the n-1 krill other than i, r3 from the n-2 others than i and r2.
  std::size_t r2 = rng.index(n - 1);
  if (r2 >= i) ++r2;
  std::size_t r3 = rng.index(n - 2);
  const std::size_t lo = std::min(i, r2);
  const std::size_t hi = std::max(i, r2);
  if (r3 >= lo) ++r3;
  if (r3 >= hi) ++r3;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (rng.uniform() < prob) out[j] = best_x[j] + mu * (positions[r2][j] - positions[r3][j]);
  }
  return out;
}

Algorithm::Algorithm(Params params) : params_(params) { validate(params_); }

void Algorithm::absorb(const Population& population) {
  const std::size_t n = population.size();
  const std::size_t dim = population.front().position.size();
  if (!state_.initialized) {
    state_.induced.assign(n, Vector(dim, 0.0));
    state_.foraging.assign(n, Vector(dim, 0.0));
    state_.personal_best = population;
    state_.global_best = population[best_index(population)];
    state_.initialized = true;
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (population[i].fitness < state_.personal_best[i].fitness) {
      state_.personal_best[i] = population[i];
    }
    if (population[i].fitness < state_.global_best.fitness) state_.global_best = population[i];
  }
}

void Algorithm::step(Population& population, StepContext& ctx) {
  const std::size_t n = population.size();
  // Picks up the initial population and any elites injected since the last step.
  absorb(population);

  std::vector<Vector> positions(n);
  std::vector<double> fitness(n);
  for (std::size_t i = 0; i < n; ++i) {
    positions[i] = population[i].position;
    fitness[i] = population[i].fitness;
  }
  const double k_best = state_.global_best.fitness;
  const double k_worst = *std::max_element(fitness.begin(), fitness.end());
  const auto& best_x = state_.global_best.position;
  const double eps = params_.epsilon;

  // Food centre; weights 1/K need positive fitness, otherwise shift.
  const double k_min = *std::min_element(fitness.begin(), fitness.end());
  const double shift = k_min > 0.0 ? 0.0 : k_min - kShiftGuard;
  std::vector<double> effective(n);
  double inverse_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    effective[i] = fitness[i] - shift;
    inverse_sum += 1.0 / effective[i];
  }
  const Vector food_x = food_position(positions, effective);
  // Harmonic mean of the weights: the fitness the centre of mass carries.
  const double food_k = static_cast<double>(n) / inverse_sum + shift;

  const double dt = delta_t(ctx.space, params_);
  const std::size_t g = ctx.iteration;
  const std::size_t g_max = ctx.max_iterations;

  std::vector<Vector> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_best = fitness[i] <= k_best;
    const double kh_best = k_hat(fitness[i], k_best, k_worst, k_best);

    const double c_best = effort_coefficient(ctx.rng.uniform(), g, g_max);
    Vector alpha = local_alpha(i, positions, fitness, k_worst, k_best, eps);
    const Vector target = target_alpha(positions[i], fitness[i], best_x, k_best, k_worst, c_best, eps);
    for (std::size_t j = 0; j < alpha.size(); ++j) alpha[j] += target[j];
    const Vector motion = induced_motion(alpha, state_.induced[i], params_);

    ForagingInput in;
    in.x = positions[i];
    in.k = fitness[i];
    in.food_x = food_x;
    in.food_k = food_k;
    in.personal_best_x = state_.personal_best[i].position;
    in.personal_best_k = state_.personal_best[i].fitness;
    in.k_worst = k_worst;
    in.k_best = k_best;
    in.c_food = effort_coefficient(ctx.rng.uniform(), g, g_max);
    const Vector forage = foraging(in, state_.foraging[i], params_);

    const Vector diffuse = diffusion(positions[i].size(), g, g_max, ctx.rng, params_);

    Vector x = positions[i];
    if (params_.crossover_enabled) {
      x = crossover(i, positions, is_best, kh_best, ctx.rng, x);
    }
    if (params_.mutation_enabled && !is_best && n >= 3) {
      const double mu = ctx.rng.uniform();
      x = mutation(i, positions, best_x, is_best, kh_best, mu, ctx.rng, x);
    }
    next[i] = update_position(x, motion, forage, diffuse, dt, ctx.space);
  }

  for (std::size_t i = 0; i < n; ++i) population[i] = ctx.evaluate(std::move(next[i]));
  absorb(population);
}

}  // namespace memopt::kha
