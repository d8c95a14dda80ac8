#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace memopt {

/// Box-bounded design space, optionally with a sorted discrete grid per
/// variable. A variable without a grid is continuous.
class SearchSpace {
 public:
  SearchSpace() = default;
  SearchSpace(std::vector<double> lower, std::vector<double> upper);

  /// Attaches a discrete value set to variable `j`. The values are sorted and
  /// must lie within the variable's bounds.
  void set_grid(std::size_t j, std::vector<double> values);

  /// Evenly spaced grid {start, start + step, ...} up to and including `stop`.
  static std::vector<double> make_grid(double start, double stop, double step);

  std::size_t dim() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double width(std::size_t j) const { return upper_[j] - lower_[j]; }

  bool has_grid(std::size_t j) const { return grids_[j].has_value(); }
  bool has_any_grid() const noexcept;
  const std::vector<double>& grid(std::size_t j) const;

  bool contains(std::span<const double> x) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::optional<std::vector<double>>> grids_;
};

/// Componentwise projection onto [lower, upper].
std::vector<double> clamp_to_bounds(std::span<const double> position, const SearchSpace& space);

/// Replaces every gridded coordinate with its nearest grid value; exact ties
/// go to the smaller value. Coordinates without a grid pass through.
std::vector<double> snap_to_grid(std::span<const double> position, const SearchSpace& space);

/// Nearest value of a sorted, non-empty grid (ties to the smaller value).
double nearest_grid_value(double value, std::span<const double> grid);

}  // namespace memopt
