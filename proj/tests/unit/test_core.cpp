#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "memopt/algorithms/registry.hpp"
#include "memopt/core/elite_memory.hpp"
#include "memopt/core/errors.hpp"
#include "memopt/core/runner.hpp"
#include "memopt/core/search_space.hpp"
#include "memopt/problems/analytic.hpp"
#include "oracles.hpp"

using namespace memopt;

namespace {

Candidate with_fitness(double f, double tag = 0.0) {
  Candidate c;
  c.position = {f, tag};
  c.objective = f;
  c.fitness = f;
  return c;
}

std::vector<double> fitnesses(const std::vector<Candidate>& v) {
  std::vector<double> out;
  for (const auto& c : v) out.push_back(c.fitness);
  return out;
}

/// Objective that turns NaN at a chosen call.
class PoisonedProblem final : public Problem {
 public:
  PoisonedProblem() : space_({-1.0, -1.0}, {1.0, 1.0}) {}
  const std::string& name() const override { return name_; }
  const SearchSpace& space() const override { return space_; }
  Evaluation evaluate(std::span<const double> x) const override {
    if (x[0] > 0.5) return {std::numeric_limits<double>::quiet_NaN(), {}};
    return {x[0] * x[0] + x[1] * x[1], {}};
  }

 private:
  std::string name_ = "poisoned";
  SearchSpace space_;
};

}  // namespace

TEST_SUITE("equations") {

TEST_CASE("clamp_to_bounds examples") {
  const SearchSpace unit({0.0}, {1.0});
  CHECK(clamp_to_bounds(std::vector<double>{1.5}, unit) == std::vector<double>{1.0});
  CHECK(clamp_to_bounds(std::vector<double>{0.5}, unit) == std::vector<double>{0.5});
  const SearchSpace square({0.0, 0.0}, {1.0, 1.0});
  CHECK(clamp_to_bounds(std::vector<double>{-3.0, 2.0}, square) == std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(clamp_to_bounds(std::vector<double>{0.0, 0.0}, unit), StructuralError);
}

TEST_CASE("snap_to_grid examples") {
  SearchSpace space({1.01}, {5.0});
  space.set_grid(0, SearchSpace::make_grid(1.01, 5.0, 0.01));
  CHECK(space.grid(0).size() == 400);
  CHECK(snap_to_grid(std::vector<double>{1.014}, space)[0] == doctest::Approx(1.01).epsilon(1e-12));
  CHECK(snap_to_grid(std::vector<double>{1.015}, space)[0] == doctest::Approx(1.01).epsilon(1e-12));
  CHECK(snap_to_grid(std::vector<double>{5.2}, space)[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_THROWS_AS(nearest_grid_value(1.0, std::vector<double>{}), ConfigError);
}

TEST_CASE("snap tie goes to the smaller value on an exact grid") {
  const std::vector<double> grid{1.0, 2.0, 3.0};
  CHECK(nearest_grid_value(1.5, grid) == 1.0);
  CHECK(nearest_grid_value(2.5, grid) == 2.0);
  CHECK(nearest_grid_value(2.6, grid) == 3.0);
}

TEST_CASE("penalized_fitness examples") {
  const PenaltyParams squared{2.0, 1.0};
  CHECK(penalized_fitness(100.0, std::vector<double>{0.0, 0.0}, squared) == 100.0);
  CHECK(penalized_fitness(100.0, std::vector<double>{0.0, 0.0}, PenaltyParams{3.0, 7.0}) == 100.0);
  CHECK(penalized_fitness(100.0, std::vector<double>{0.5}, squared) == doctest::Approx(225.0).epsilon(1e-12));
  CHECK(penalized_fitness(0.0, std::vector<double>{3.0}, PenaltyParams{1.0, 1.0}) == 0.0);
  CHECK(penalized_fitness(42.0, std::vector<double>{5.0}, PenaltyParams{2.0, 0.0}) == 42.0);
  CHECK_THROWS_AS(penalized_fitness(1.0, std::vector<double>{-0.1}, squared), ContractError);
}

TEST_CASE("memory_update examples") {
  EliteMemory empty(2);
  CHECK(empty.update(with_fitness(5)));
  CHECK(fitnesses(empty.entries()) == std::vector<double>{5});

  EliteMemory m(2);
  m.update(with_fitness(3));
  m.update(with_fitness(5));
  CHECK(m.update(with_fitness(4)));
  CHECK(fitnesses(m.entries()) == std::vector<double>{3, 4});

  EliteMemory r(2);
  r.update(with_fitness(3));
  r.update(with_fitness(5));
  CHECK_FALSE(r.update(with_fitness(7)));
  CHECK(fitnesses(r.entries()) == std::vector<double>{3, 5});
}

TEST_CASE("memory ignores position duplicates and keeps the earlier tie") {
  EliteMemory m(2);
  m.update(with_fitness(1, 0));
  CHECK_FALSE(m.update(with_fitness(1, 0)));
  CHECK(m.size() == 1);
  m.update(with_fitness(2, 1));
  CHECK_FALSE(m.update(with_fitness(2, 2)));  // full, tie with worst: earlier arrival stays
  CHECK(m.entries()[1].position[1] == 1.0);
}

TEST_CASE("memory_inject examples") {
  Population pop{with_fitness(1, 0), with_fitness(9, 1), with_fitness(10, 2)};
  EliteMemory m(1);
  m.update(with_fitness(2, 9));
  memory_inject(pop, m);
  CHECK(fitnesses(pop) == std::vector<double>{1, 9, 2});

  Population two{with_fitness(1), with_fitness(2)};
  EliteMemory none(3);
  memory_inject(two, none);
  CHECK(fitnesses(two) == std::vector<double>{1, 2});

  Population flat{with_fitness(5, 0), with_fitness(5, 1), with_fitness(5, 2)};
  EliteMemory pair(2);
  pair.update(with_fitness(1, 7));
  pair.update(with_fitness(2, 8));
  memory_inject(flat, pair);
  auto f = fitnesses(flat);
  std::sort(f.begin(), f.end());
  CHECK(f == std::vector<double>{1, 2, 5});
  CHECK(flat[0].position[1] == 0.0);  // higher indices replaced first among equals
}

TEST_CASE("memory capacity") {
  CHECK(memory_capacity(50, 0.2) == 10);
  CHECK(memory_capacity(20, 0.2) == 4);
  CHECK(memory_capacity(3, 0.2) == 1);
  CHECK_THROWS_AS(memory_capacity(10, 0.0), ConfigError);
}

TEST_CASE("replicate_stats examples") {
  const std::vector<double> one{21.91};
  const std::vector<double> n1{100};
  auto s = replicate_stats(one, n1);
  CHECK(s.best == 21.91);
  CHECK(s.mean == 21.91);
  CHECK(s.worst == 21.91);
  CHECK(s.std == 0.0);
  CHECK(s.runs == 1);

  const std::vector<double> two{1.0, 3.0};
  const std::vector<double> n2{10, 20};
  s = replicate_stats(two, n2);
  CHECK(s.best == 1.0);
  CHECK(s.mean == 2.0);
  CHECK(s.worst == 3.0);
  CHECK(s.std == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s.nfes_median == 15.0);

  const std::vector<double> flat{2.0, 2.0, 2.0};
  const std::vector<double> n3{1, 2, 3};
  CHECK(replicate_stats(flat, n3).std == 0.0);
  CHECK(replicate_stats(flat, n3).nfes_median == 2.0);

  CHECK_THROWS_AS(replicate_stats(std::span<const double>{}, std::span<const double>{}), ContractError);
}

TEST_CASE("run bookkeeping on sphere, dim 2, NP 10, 50 iterations") {
  const AnalyticProblem sphere2(AnalyticKind::sphere, 2);
  for (const auto& name : algorithm_names()) {
    CAPTURE(name);
    AlgorithmSpec spec;
    spec.name = name;
    RunConfig cfg;
    cfg.population_size = 10;
    cfg.max_iterations = 50;
    cfg.seed = 17;
    auto alg = make_algorithm(spec);
    const RunResult r = run(*alg, sphere2, cfg);
    CHECK(r.history.size() == 51);
    for (std::size_t k = 1; k < r.history.size(); ++k) {
      CHECK(r.history[k].best_so_far <= r.history[k - 1].best_so_far);
    }
    const std::size_t per = alg->evaluations_per_iteration(10);
    CHECK(r.nfes == 10 + 50 * per);
    if (name != "teo") CHECK(r.nfes == 10 * 51);
  }
}

TEST_CASE("run is deterministic for equal seeds") {
  const AnalyticProblem sphere2(AnalyticKind::sphere, 2);
  for (const auto& name : algorithm_names()) {
    for (bool memory : {false, true}) {
      AlgorithmSpec spec;
      spec.name = name;
      RunConfig cfg;
      cfg.population_size = 10;
      cfg.max_iterations = 20;
      cfg.memory_enabled = memory;
      cfg.seed = 99;
      auto a = make_algorithm(spec);
      auto b = make_algorithm(spec);
      const RunResult ra = run(*a, sphere2, cfg);
      const RunResult rb = run(*b, sphere2, cfg);
      REQUIRE(ra.history.size() == rb.history.size());
      for (std::size_t k = 0; k < ra.history.size(); ++k) {
        CHECK(ra.history[k].best_so_far == rb.history[k].best_so_far);
      }
      CHECK(ra.best.position == rb.best.position);
    }
  }
}

}  // TEST_SUITE equations

TEST_CASE("run aborts with an evaluation error naming the candidate") {
  PoisonedProblem p;
  AlgorithmSpec spec;
  RunConfig cfg;
  cfg.population_size = 10;
  cfg.max_iterations = 5;
  auto alg = make_algorithm(spec);
  try {
    run(*alg, p, cfg);
    FAIL("expected an evaluation error");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("candidate") != std::string::npos);
  }
}

TEST_CASE("iterations_for_budget counts the initial population") {
  AlgorithmSpec spec;
  auto bbo = make_algorithm(spec);
  CHECK(iterations_for_budget(*bbo, 50, 4000) == 79);
  spec.name = "teo";
  auto teo = make_algorithm(spec);
  CHECK(iterations_for_budget(*teo, 50, 4000) == 158);
  CHECK_THROWS_AS(iterations_for_budget(*bbo, 50, 60), ConfigError);
}

TEST_CASE("search space rejects bad construction") {
  CHECK_THROWS_AS(SearchSpace({1.0}, {0.0}), ConfigError);
  CHECK_THROWS_AS(SearchSpace({0.0, 0.0}, {1.0}), StructuralError);
  SearchSpace s({0.0}, {1.0});
  CHECK_THROWS_AS(s.set_grid(0, {0.5, 2.0}), ConfigError);
}

TEST_SUITE("properties") {

TEST_CASE("elite memory matches a brute-force top-M oracle") {
  std::mt19937_64 gen(20240501);
  for (int trial = 0; trial < 40; ++trial) {
    const auto stream = oracle::random_stream(gen, 1 + gen() % 2000);
    for (std::size_t m : {1u, 2u, 5u, 20u}) {
      EliteMemory memory(m);
      for (const auto& c : stream) memory.update(c);
      const auto expected = oracle::brute_force_top(stream, m);
      REQUIRE(memory.size() == expected.size());
      for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(memory.entries()[k].position == expected[k].position);
        CHECK(memory.entries()[k].fitness == expected[k].fitness);
      }
    }
  }
}

TEST_CASE("memory_inject keeps size and never worsens the best") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen() % 30;
    Population pop;
    for (std::size_t i = 0; i < n; ++i) pop.push_back(with_fitness(u(gen), static_cast<double>(i)));
    EliteMemory m(1 + gen() % n);
    for (int k = 0; k < 40; ++k) m.update(with_fitness(u(gen), 1000.0 + k));
    // The run loop updates memory from the population before injecting.
    for (const auto& c : pop) m.update(c);
    const double before = pop[best_index(pop)].fitness;
    memory_inject(pop, m);
    CHECK(pop.size() == n);
    CHECK(pop[best_index(pop)].fitness <= before);
  }
}

TEST_CASE("penalty is monotone in each violation and identity when feasible") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const PenaltyParams p{1.0 + u(gen), u(gen)};
    const double obj = 1.0 + 50.0 * u(gen);
    std::vector<double> v{u(gen), u(gen), u(gen)};
    const double base = penalized_fitness(obj, v, p);
    CHECK(base >= obj);
    const std::size_t k = gen() % v.size();
    v[k] += u(gen);
    CHECK(penalized_fitness(obj, v, p) >= base);
    CHECK(penalized_fitness(obj, std::vector<double>(3, 0.0), p) == obj);
  }
}

TEST_CASE("clamp is idempotent and lands inside the bounds") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const SearchSpace s({-1.0, 0.0, 2.0}, {1.0, 5.0, 2.0});
  for (int trial = 0; trial < 500; ++trial) {
    const std::vector<double> x{u(gen), u(gen), u(gen)};
    const auto once = clamp_to_bounds(x, s);
    CHECK(s.contains(once));
    CHECK(clamp_to_bounds(once, s) == once);
  }
}

}  // TEST_SUITE properties
