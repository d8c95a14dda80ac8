#include "memopt/algorithms/registry.hpp"

#include "memopt/core/errors.hpp"

namespace memopt {

std::unique_ptr<Algorithm> make_algorithm(const AlgorithmSpec& spec) {
  if (spec.name == "bbo") return std::make_unique<bbo::Algorithm>(spec.bbo);
  if (spec.name == "kha") return std::make_unique<kha::Algorithm>(spec.kha);
  if (spec.name == "teo") return std::make_unique<teo::Algorithm>(spec.teo);
  throw ConfigError("unknown algorithm '" + spec.name + "'");
}

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"bbo", "kha", "teo"};
  return names;
}

}  // namespace memopt
