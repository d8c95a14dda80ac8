#include "memopt/fem/truss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "memopt/core/errors.hpp"

namespace memopt::fem {

namespace {

// Relative pivot below which the reduced stiffness is treated as singular.
constexpr double kSingularPivot = 1e-12;

Eigen::MatrixXd reduce(const Eigen::MatrixXd& full, const std::vector<std::size_t>& keep) {
  const auto n = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = full(keep[r], keep[c]);
  }
  return out;
}

}  // namespace

void TrussModel::validate() const {
  const std::size_t n = nodes.size();
  if (supports.size() != n || loads.size() != n || lumped_masses.size() != n) {
    throw ModelError("supports, loads and masses need one entry per node");
  }
  if (!(material.young_modulus > 0.0) || !(material.density >= 0.0)) {
    throw ModelError("material constants must be positive");
  }
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const Element& el = elements[e];
    if (el.a >= n || el.b >= n) throw ModelError("element " + std::to_string(e) + " references a missing node");
    if (el.a == el.b) throw ModelError("element " + std::to_string(e) + " has coincident endpoints");
    if (!(el.area > 0.0)) throw ModelError("element " + std::to_string(e) + " has non-positive area");
    if (!(element_length(el, nodes) > 0.0)) throw ModelError("element " + std::to_string(e) + " has zero length");
  }
  std::size_t constrained = 0;
  for (const Support& s : supports) constrained += static_cast<std::size_t>(s.fix_x) + static_cast<std::size_t>(s.fix_y);
  if (constrained < 3) throw ModelError("fewer than three constrained degrees of freedom");
  for (double m : lumped_masses) {
    if (m < 0.0) throw ModelError("negative lumped mass");
  }
}

double element_length(const Element& element, std::span<const Node> nodes) {
  const Node& a = nodes[element.a];
  const Node& b = nodes[element.b];
  return std::hypot(b.x - a.x, b.y - a.y);
}

double min_element_length(const TrussModel& model) {
  if (model.elements.empty()) return 0.0;
  double shortest = std::numeric_limits<double>::infinity();
  for (const Element& e : model.elements) shortest = std::min(shortest, element_length(e, model.nodes));
  return shortest;
}

Eigen::Matrix4d element_stiffness(const Element& element, std::span<const Node> nodes,
                                  double young_modulus) {
  const double length = element_length(element, nodes);
  if (!(length > 0.0)) throw ModelError("zero-length element");
  const Node& a = nodes[element.a];
  const Node& b = nodes[element.b];
  const double c = (b.x - a.x) / length;
  const double s = (b.y - a.y) / length;
  const Eigen::Vector4d t(-c, -s, c, s);
  return (young_modulus * element.area / length) * (t * t.transpose());
}

Eigen::MatrixXd assemble_stiffness(const TrussModel& model) {
  const auto ndof = static_cast<Eigen::Index>(model.dof_count());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(ndof, ndof);
  for (const Element& e : model.elements) {
    const Eigen::Matrix4d ke = element_stiffness(e, model.nodes, model.material.young_modulus);
    const std::size_t map[4] = {2 * e.a, 2 * e.a + 1, 2 * e.b, 2 * e.b + 1};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) k(map[r], map[c]) += ke(r, c);
    }
  }
  return k;
}

std::vector<std::size_t> free_dofs(const TrussModel& model) {
  std::vector<std::size_t> dofs;
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    if (!model.supports[i].fix_x) dofs.push_back(2 * i);
    if (!model.supports[i].fix_y) dofs.push_back(2 * i + 1);
  }
  return dofs;
}

double structural_weight(const TrussModel& model) {
  double w = 0.0;
  for (const Element& e : model.elements) {
    w += model.material.density * e.area * element_length(e, model.nodes);
  }
  return w;
}

Eigen::VectorXd lumped_mass_diagonal(const TrussModel& model) {
  std::vector<double> node_mass = model.lumped_masses;
  for (const Element& e : model.elements) {
    const double half = 0.5 * model.material.density * e.area * element_length(e, model.nodes);
    node_mass[e.a] += half;
    node_mass[e.b] += half;
  }
  Eigen::VectorXd m(static_cast<Eigen::Index>(model.dof_count()));
  for (std::size_t i = 0; i < node_mass.size(); ++i) {
    m(2 * i) = node_mass[i];
    m(2 * i + 1) = node_mass[i];
  }
  return m;
}

AnalysisResult solve_static(const TrussModel& model) {
  model.validate();
  const Eigen::MatrixXd k = assemble_stiffness(model);
  const auto dofs = free_dofs(model);
  const Eigen::MatrixXd kff = reduce(k, dofs);

  Eigen::VectorXd f(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t r = 0; r < dofs.size(); ++r) {
    const Load& load = model.loads[dofs[r] / 2];
    f(static_cast<Eigen::Index>(r)) = (dofs[r] % 2 == 0) ? load.fx : load.fy;
  }

  AnalysisResult result;
  result.displacements.assign(model.dof_count(), 0.0);
  if (!dofs.empty()) {
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(kff);
    const Eigen::VectorXd d = ldlt.vectorD();
    const double scale = d.cwiseAbs().maxCoeff();
    const double pivot = d.cwiseAbs().minCoeff();
    if (ldlt.info() != Eigen::Success || !(scale > 0.0) || pivot <= kSingularPivot * scale) {
      throw AnalysisError("singular reduced stiffness (mechanism), relative pivot " +
                              std::to_string(scale > 0.0 ? pivot / scale : 0.0),
                          pivot);
    }
    const Eigen::VectorXd u = ldlt.solve(f);
    for (std::size_t r = 0; r < dofs.size(); ++r) result.displacements[dofs[r]] = u(static_cast<Eigen::Index>(r));
  }

  result.stresses.reserve(model.elements.size());
  for (const Element& e : model.elements) {
    const Node& a = model.nodes[e.a];
    const Node& b = model.nodes[e.b];
    const double length = element_length(e, model.nodes);
    const double c = (b.x - a.x) / length;
    const double s = (b.y - a.y) / length;
    const auto& u = result.displacements;
    const double elongation = c * (u[2 * e.b] - u[2 * e.a]) + s * (u[2 * e.b + 1] - u[2 * e.a + 1]);
    result.stresses.push_back(model.material.young_modulus * elongation / length);
  }
  result.weight = structural_weight(model);
  return result;
}

std::vector<double> natural_frequencies(const TrussModel& model, std::size_t count) {
  model.validate();
  const auto dofs = free_dofs(model);
  if (count > dofs.size()) throw ContractError("more modes requested than free DOFs");
  if (count == 0) return {};

  const Eigen::MatrixXd kff = reduce(assemble_stiffness(model), dofs);
  const Eigen::VectorXd m_all = lumped_mass_diagonal(model);
  Eigen::VectorXd inv_sqrt_m(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t r = 0; r < dofs.size(); ++r) {
    const double m = m_all(static_cast<Eigen::Index>(dofs[r]));
    if (!(m > 0.0)) throw ModelError("free DOF " + std::to_string(dofs[r]) + " carries no mass");
    inv_sqrt_m(static_cast<Eigen::Index>(r)) = 1.0 / std::sqrt(m);
  }
  // M^{-1/2} K M^{-1/2} is symmetric and shares the generalized eigenvalues.
  const Eigen::MatrixXd a = inv_sqrt_m.asDiagonal() * kff * inv_sqrt_m.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw AnalysisError("eigen-solver did not converge");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double tol = 1e-10 * std::max(1.0, lambda.cwiseAbs().maxCoeff());

  std::vector<double> freqs;
  freqs.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    double l = lambda(static_cast<Eigen::Index>(r));
    if (l < -tol) throw AnalysisError("negative eigenvalue in modal analysis", l);
    l = std::max(l, 0.0);
    freqs.push_back(std::sqrt(l) / (2.0 * std::numbers::pi));
  }
  return freqs;
}

std::vector<double> evaluate_constraints(const AnalysisResult& result, const ConstraintLimits& limits) {
  std::vector<double> v;
  if (limits.stress_limit) {
    for (double s : result.stresses) v.push_back(std::max(0.0, std::abs(s) / *limits.stress_limit - 1.0));
  }
  for (const DisplacementLimit& d : limits.displacement) {
    const std::size_t dof = 2 * d.node + (d.axis == Axis::y ? 1 : 0);
    if (dof >= result.displacements.size()) throw ContractError("displacement limit on a missing node");
    v.push_back(std::max(0.0, std::abs(result.displacements[dof]) / d.limit - 1.0));
  }
  if (result.frequencies.size() < limits.frequency_lower_bounds.size()) {
    throw ContractError("fewer frequencies than frequency bounds");
  }
  for (std::size_t k = 0; k < limits.frequency_lower_bounds.size(); ++k) {
    v.push_back(std::max(0.0, 1.0 - result.frequencies[k] / limits.frequency_lower_bounds[k]));
  }
  return v;
}

}  // namespace memopt::fem
