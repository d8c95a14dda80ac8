#pragma once

#include <cstddef>
#include <vector>

#include "memopt/core/candidate.hpp"

namespace memopt {

/// Fixed-capacity archive of the best distinct candidates seen so far.
///
/// Entries are kept sorted ascending by fitness. A newcomer that ties an
/// existing fitness is placed after it, and a full archive only admits
/// strictly better candidates, so among equal fitness the earlier arrival
/// wins. Candidates whose position equals an archived one are ignored.
class EliteMemory {
 public:
  explicit EliteMemory(std::size_t capacity);

  /// Offers a candidate. Returns true if the archive changed.
  bool update(const Candidate& candidate);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool full() const noexcept { return entries_.size() == capacity_; }
  const std::vector<Candidate>& entries() const noexcept { return entries_; }

 private:
  bool contains_position(const std::vector<double>& position) const;

  std::size_t capacity_;
  std::vector<Candidate> entries_;
};

/// Archive size for a population: floor(fraction * population_size), at least 1.
std::size_t memory_capacity(std::size_t population_size, double fraction);

/// Overwrites the |memory| worst population members with copies of the
/// archived elites. Worst members are found by a stable fitness sort, so among
/// equal fitness the higher index is replaced first.
void memory_inject(Population& population, const EliteMemory& memory);

}  // namespace memopt
