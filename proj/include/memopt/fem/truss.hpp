#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace memopt::fem {

struct Node {
  double x = 0.0;
  double y = 0.0;
};

struct Element {
  std::size_t a = 0;  ///< 0-based node index
  std::size_t b = 0;
  double area = 0.0;  ///< m^2
  int group = 0;
};

struct Support {
  bool fix_x = false;
  bool fix_y = false;
};

struct Load {
  double fx = 0.0;  ///< N
  double fy = 0.0;
};

struct Material {
  double young_modulus = 0.0;  ///< Pa
  double density = 0.0;        ///< kg/m^3
};

/// Pin-jointed planar truss in SI units. `supports`, `loads` and
/// `lumped_masses` are indexed by node; `validate` resizes nothing, so they
/// must already have one entry per node.
struct TrussModel {
  std::vector<Node> nodes;
  std::vector<Element> elements;
  std::vector<Support> supports;
  std::vector<Load> loads;
  std::vector<double> lumped_masses;  ///< kg, non-structural
  Material material;

  std::size_t dof_count() const noexcept { return 2 * nodes.size(); }

  /// Throws ModelError on bad indices, coincident endpoints, zero length,
  /// non-positive area or material constants, or fewer than three
  /// constrained degrees of freedom.
  void validate() const;
};

double element_length(const Element& element, std::span<const Node> nodes);

/// Shortest member of the model (0 for a model without elements).
double min_element_length(const TrussModel& model);

/// Global 4x4 stiffness of one bar, DOF order (ax, ay, bx, by).
Eigen::Matrix4d element_stiffness(const Element& element, std::span<const Node> nodes,
                                  double young_modulus);

/// Full 2n x 2n stiffness before support reduction.
Eigen::MatrixXd assemble_stiffness(const TrussModel& model);

/// Indices of unconstrained DOFs in ascending order (DOF 2k = x of node k).
std::vector<std::size_t> free_dofs(const TrussModel& model);

/// Sum of rho * A * L over all bars (kg).
double structural_weight(const TrussModel& model);

/// Per-DOF lumped mass: attached nodal mass plus half of each adjacent bar.
Eigen::VectorXd lumped_mass_diagonal(const TrussModel& model);

struct AnalysisResult {
  std::vector<double> displacements;  ///< per DOF, zeros on supports (m)
  std::vector<double> stresses;       ///< per element, tension positive (Pa)
  std::vector<double> frequencies;    ///< ascending (Hz), empty unless requested
  double weight = 0.0;                ///< kg
};

/// Linear static analysis. Throws AnalysisError (with the offending pivot)
/// when the reduced stiffness is singular.
AnalysisResult solve_static(const TrussModel& model);

/// The `count` lowest natural frequencies (Hz) of K phi = omega^2 M phi on
/// the free DOFs, with the lumped mass matrix.
std::vector<double> natural_frequencies(const TrussModel& model, std::size_t count);

enum class Axis { x, y };

struct DisplacementLimit {
  std::size_t node = 0;
  Axis axis = Axis::y;
  double limit = 0.0;  ///< bound on |u| (m)
};

struct ConstraintLimits {
  std::optional<double> stress_limit;  ///< bound on |sigma| (Pa)
  std::vector<DisplacementLimit> displacement;
  std::vector<double> frequency_lower_bounds;  ///< Hz, one per mode from the first
};

/// Normalized violations in a fixed order: one per element (stress), one per
/// displacement limit, one per frequency bound.
std::vector<double> evaluate_constraints(const AnalysisResult& result, const ConstraintLimits& limits);

}  // namespace memopt::fem
