#include "memopt/core/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memopt/core/errors.hpp"

namespace memopt {

SearchSpace::SearchSpace(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw ConfigError("search space must have at least one variable");
  if (lower_.size() != upper_.size()) {
    throw StructuralError("search space bounds differ in length");
  }
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!(lower_[j] <= upper_[j])) {
      throw ConfigError("lower bound exceeds upper bound for variable " + std::to_string(j));
    }
  }
  grids_.resize(lower_.size());
}

void SearchSpace::set_grid(std::size_t j, std::vector<double> values) {
  if (j >= dim()) throw StructuralError("grid index out of range");
  if (values.empty()) throw ConfigError("empty grid for variable " + std::to_string(j));
  std::sort(values.begin(), values.end());
  for (double v : values) {
    if (!std::isfinite(v) || v < lower_[j] || v > upper_[j]) {
      throw ConfigError("grid value outside bounds for variable " + std::to_string(j));
    }
  }
  grids_[j] = std::move(values);
}

std::vector<double> SearchSpace::make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw ConfigError("invalid grid specification");
  // Integer stepping avoids accumulated drift; values are rounded to the
  // step's decimal resolution so that 1.01 + 3*0.01 prints as 1.04.
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(count);
  const double resolution = std::pow(10.0, std::ceil(-std::log10(step)) + 2);
  for (std::size_t k = 0; k < count; ++k) {
    const double v = start + static_cast<double>(k) * step;
    values.push_back(std::round(v * resolution) / resolution);
  }
  return values;
}

bool SearchSpace::has_any_grid() const noexcept {
  return std::any_of(grids_.begin(), grids_.end(), [](const auto& g) { return g.has_value(); });
}

const std::vector<double>& SearchSpace::grid(std::size_t j) const {
  if (j >= dim() || !grids_[j]) throw ConfigError("no grid defined for variable " + std::to_string(j));
  return *grids_[j];
}

bool SearchSpace::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t j = 0; j < dim(); ++j) {
    if (x[j] < lower_[j] || x[j] > upper_[j]) return false;
  }
  return true;
}

std::vector<double> clamp_to_bounds(std::span<const double> position, const SearchSpace& space) {
  if (position.size() != space.dim()) {
    throw StructuralError("position has " + std::to_string(position.size()) +
                          " components, search space has " + std::to_string(space.dim()));
  }
  std::vector<double> out(position.begin(), position.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = std::min(space.upper()[j], std::max(space.lower()[j], out[j]));
  }
  return out;
}

double nearest_grid_value(double value, std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("cannot snap to an empty grid");
  const auto it = std::lower_bound(grid.begin(), grid.end(), value);
  if (it == grid.begin()) return grid.front();
  if (it == grid.end()) return grid.back();
  const double above = *it;
  const double below = *(it - 1);
  // Decimal midpoints such as 1.015 are not exact in binary; treat anything
  // within rounding noise of the midpoint as a tie.
  const double tie_tol = 1e-12 * std::max(1.0, std::abs(value));
  return (above - value < value - below - tie_tol) ? above : below;
}

std::vector<double> snap_to_grid(std::span<const double> position, const SearchSpace& space) {
  if (position.size() != space.dim()) throw StructuralError("position dimension mismatch");
  std::vector<double> out(position.begin(), position.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (space.has_grid(j)) out[j] = nearest_grid_value(out[j], space.grid(j));
  }
  return out;
}

}  // namespace memopt
