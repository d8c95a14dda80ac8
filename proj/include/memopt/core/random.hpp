#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace memopt {

/// Source of uniform variates consumed by the step operators. Operators take
/// this interface so tests can replay a scripted stream.
class RandomStream {
 public:
  virtual ~RandomStream() = default;

  /// Uniform double in [0, 1).
  virtual double uniform() = 0;

  /// Uniform integer in [0, n). n must be positive.
  virtual std::size_t index(std::size_t n) = 0;

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

/// Seeded 64-bit Mersenne Twister. The conversion to doubles and bounded
/// integers is done here rather than through <random> distributions, whose
/// output is implementation-defined, so streams are identical on every
/// platform.
class Rng final : public RandomStream {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() override {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::size_t index(std::size_t n) override {
    // Rejection sampling removes modulo bias.
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return static_cast<std::size_t>(draw % bound);
  }

  using RandomStream::uniform;

 private:
  std::mt19937_64 engine_;
};

}  // namespace memopt
