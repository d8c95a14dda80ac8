#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memopt/core/problem.hpp"
#include "memopt/fem/truss.hpp"

namespace memopt {

/// Where one coordinate variable writes. In `absolute` mode the coordinate
/// becomes factor * value * scale; in `offset` mode factor * value * scale is
/// added to the node's base coordinate (several variables may contribute).
struct CoordinateTarget {
  std::size_t node = 0;  ///< 0-based
  fem::Axis axis = fem::Axis::y;
  double factor = 1.0;
  bool absolute = true;
};

enum class VariableKind { area, coordinate };

/// One slot of the design vector. Bounds are in file units; `scale` converts
/// to SI (e.g. 1e-4 for cm^2 -> m^2).
struct DesignVariable {
  std::string name;
  VariableKind kind = VariableKind::area;
  double lower = 0.0;
  double upper = 0.0;
  double scale = 1.0;
  double grid_step = 0.0;            ///< > 0 puts the variable on a discrete grid
  std::vector<int> groups;           ///< area variables: element groups sized by this slot
  std::vector<CoordinateTarget> targets;  ///< coordinate variables
};

struct NodalDisplacementBound {
  bool all_nodes = false;
  std::size_t node = 0;
  fem::Axis axis = fem::Axis::y;
  double limit = 0.0;  ///< m
};

/// Parsed truss geometry file: base model (element areas hold the fixed
/// areas, 0 where a variable sizes the element), constraints and variables.
struct TrussDefinition {
  std::string name;
  std::string description;
  fem::TrussModel base;
  std::vector<int> node_ids;  ///< file ids, by 0-based index
  std::vector<int> element_ids;
  std::optional<double> stress_limit;
  std::vector<NodalDisplacementBound> displacement_bounds;
  std::vector<double> frequency_lower_bounds;
  std::vector<DesignVariable> variables;
};

/// Parses the JSON geometry document documented in data/README.md. `source`
/// names the document in error messages. Throws ConfigError.
TrussDefinition parse_truss_definition(const std::string& text, const std::string& source);

/// Reads and parses a geometry file; a missing file is a ConfigError.
TrussDefinition load_truss_definition(const std::filesystem::path& path);

/// Physical design: one area per element and the full node list.
struct ExpandedDesign {
  std::vector<double> areas;  ///< m^2
  std::vector<fem::Node> nodes;
};

/// Size-and-shape truss benchmark: the objective is structural weight and the
/// violations come from the stress, displacement and frequency limits of the
/// definition.
class TrussProblem final : public Problem {
 public:
  explicit TrussProblem(TrussDefinition definition);

  const std::string& name() const override { return definition_.name; }
  const SearchSpace& space() const override { return space_; }
  Evaluation evaluate(std::span<const double> x) const override;
  std::vector<double> decode(std::span<const double> x) const override;

  const TrussDefinition& definition() const noexcept { return definition_; }

  /// Design vector (as given, no grid snapping) to per-element areas and
  /// node coordinates.
  ExpandedDesign expand(std::span<const double> x) const;

  /// Inverse of `expand` for designs that `expand` can produce.
  std::vector<double> contract(const ExpandedDesign& design) const;

  /// Analysis model for design vector `x` (after decoding).
  fem::TrussModel build_model(std::span<const double> x) const;

  /// Limits in the order evaluate reports violations.
  fem::ConstraintLimits limits() const;

 private:
  TrussDefinition definition_;
  SearchSpace space_;
  std::vector<int> group_variable_;  ///< per element: sizing variable index or -1
};

/// Members shorter than this make a design infeasible instead of failing.
inline constexpr double kDegenerateLength = 1e-6;
/// Violation reported for degenerate or unanalysable geometry.
inline constexpr double kDegenerateViolation = 1e3;

}  // namespace memopt
