#include "memopt/core/elite_memory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "memopt/core/errors.hpp"

namespace memopt {

EliteMemory::EliteMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("elite memory capacity must be positive");
  entries_.reserve(capacity_);
}

bool EliteMemory::contains_position(const std::vector<double>& position) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Candidate& e) { return e.position == position; });
}

bool EliteMemory::update(const Candidate& candidate) {
  if (full() && !(candidate.fitness < entries_.back().fitness)) return false;
  if (contains_position(candidate.position)) return false;
  if (full()) entries_.pop_back();
  const auto at = std::upper_bound(
      entries_.begin(), entries_.end(), candidate.fitness,
      [](double f, const Candidate& e) { return f < e.fitness; });
  entries_.insert(at, candidate);
  return true;
}

std::size_t memory_capacity(std::size_t population_size, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("memory_fraction must be in (0, 1]");
  const auto m = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(population_size)));
  return std::max<std::size_t>(m, 1);
}

void memory_inject(Population& population, const EliteMemory& memory) {
  const std::size_t count = memory.size();
  if (count == 0) return;
  if (count > population.size()) throw ContractError("memory larger than population");

  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return population[a].fitness < population[b].fitness;
  });
  // order.back() is the worst; it receives the best elite.
  for (std::size_t k = 0; k < count; ++k) {
    population[order[order.size() - 1 - k]] = memory.entries()[k];
  }
}

}  // namespace memopt
