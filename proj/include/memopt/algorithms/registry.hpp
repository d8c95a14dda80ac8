#pragma once

#include <memory>
#include <string>
#include <vector>

#include "memopt/algorithms/bbo.hpp"
#include "memopt/algorithms/kha.hpp"
#include "memopt/algorithms/teo.hpp"

namespace memopt {

/// Algorithm name plus the parameter tables of all three methods; only the
/// table matching `name` is used.
struct AlgorithmSpec {
  std::string name = "bbo";
  bbo::Params bbo{};
  kha::Params kha{};
  teo::Params teo{};
};

/// Fresh algorithm instance (per-run state) for `spec`. Throws ConfigError
/// for unknown names.
std::unique_ptr<Algorithm> make_algorithm(const AlgorithmSpec& spec);

/// Names accepted by make_algorithm: bbo, kha, teo.
const std::vector<std::string>& algorithm_names();

}  // namespace memopt
