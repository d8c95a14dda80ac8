#include "memopt/problems/registry.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "memopt/core/errors.hpp"
#include "memopt/problems/analytic.hpp"
#include "memopt/problems/truss_problem.hpp"

#ifndef MEMOPT_DEFAULT_DATA_DIR
#define MEMOPT_DEFAULT_DATA_DIR "data"
#endif

namespace memopt {

std::filesystem::path data_directory(const std::optional<std::filesystem::path>& override_dir) {
  if (override_dir) return *override_dir;
  if (const char* env = std::getenv(kDataDirEnv); env != nullptr && *env != '\0') return env;
  return MEMOPT_DEFAULT_DATA_DIR;
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"michell", "forth", "truss37", "sphere", "rastrigin", "rosenbrock"};
  return names;
}

std::unique_ptr<Problem> make_problem(const std::string& name, const ProblemOptions& options) {
  if (name == "sphere") return std::make_unique<AnalyticProblem>(AnalyticKind::sphere, options.dim);
  if (name == "rastrigin") return std::make_unique<AnalyticProblem>(AnalyticKind::rastrigin, options.dim);
  if (name == "rosenbrock") return std::make_unique<AnalyticProblem>(AnalyticKind::rosenbrock, options.dim);
  if (name == "michell" || name == "forth" || name == "truss37") {
    const auto path = data_directory(options.data_dir) / (name + ".json");
    return std::make_unique<TrussProblem>(load_truss_definition(path));
  }
  throw ConfigError("unknown problem '" + name + "'");
}

double michell_analytical_weight(double sigma_plus, double half_span, double load, double density) {
  if (!(sigma_plus > 0.0) || !(half_span > 0.0) || !(load > 0.0) || !(density > 0.0)) {
    throw ContractError("michell_analytical_weight: inputs must be positive");
  }
  return 12.0 / sigma_plus * half_span * load * density * std::tan(std::numbers::pi / 12.0);
}

}  // namespace memopt
