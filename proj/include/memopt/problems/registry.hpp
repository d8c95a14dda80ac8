#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "memopt/core/problem.hpp"

namespace memopt {

/// Environment variable that overrides the geometry data directory.
inline constexpr const char* kDataDirEnv = "MEMOPT_DATA_DIR";

struct ProblemOptions {
  std::size_t dim = 10;  ///< analytic problems only
  std::optional<std::filesystem::path> data_dir;
};

/// Data directory: explicit override, else $MEMOPT_DATA_DIR, else the
/// directory configured at build time.
std::filesystem::path data_directory(const std::optional<std::filesystem::path>& override_dir = {});

/// michell, forth, truss37, sphere, rastrigin, rosenbrock.
const std::vector<std::string>& problem_names();

/// Throws ConfigError for unknown names or missing geometry files.
std::unique_ptr<Problem> make_problem(const std::string& name, const ProblemOptions& options = {});

/// Weight of the optimal Michell arch for equal tension and compression
/// limits: W = (12 / sigma) * L * P * rho * tan(pi / 12), with L the half-span.
/// Throws ContractError unless every input is positive.
double michell_analytical_weight(double sigma_plus, double half_span, double load, double density);

}  // namespace memopt
