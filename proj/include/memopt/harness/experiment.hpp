#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "memopt/algorithms/registry.hpp"
#include "memopt/core/runner.hpp"
#include "memopt/problems/registry.hpp"

namespace memopt {

enum class MemoryMode { on, off, both };

/// One algorithm x problem x memory-flag combination.
struct CellSpec {
  AlgorithmSpec algorithm;
  std::string problem;
  RunConfig config;  ///< config.seed is the plan's root seed
  std::string id() const;
};

struct ExperimentPlan {
  std::vector<CellSpec> cells;
  std::filesystem::path out_dir = "results";
  std::size_t workers = 1;
  ProblemOptions problem_options;
};

/// Command-line values that take precedence over the plan file.
struct PlanOverrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<MemoryMode> memory;
};

/// Parses a JSON plan (schema in README.md). Throws ConfigError.
ExperimentPlan parse_plan(const std::string& text, const std::string& source, const PlanOverrides& overrides = {});
ExperimentPlan load_plan(const std::filesystem::path& path, const PlanOverrides& overrides = {});

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const std::string& text);
/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of replicate `r` of a cell: root ^ splitmix64(fnv1a64("alg/problem#r")).
/// The memory flag is not part of the key, so standard and memory variants
/// of a cell see the same seeds.
std::uint64_t replicate_seed(std::uint64_t root, const std::string& algorithm, const std::string& problem,
                             std::size_t replicate);

struct CellOutcome {
  CellSpec spec;
  bool ok = false;
  std::string error;  ///< first failure message when !ok
  ReplicateStats stats;
  std::vector<RunResult> runs;  ///< empty when !ok
};

struct Improvement {
  std::string algorithm;
  std::string problem;
  double standard_mean = 0.0;
  double memory_mean = 0.0;
  double percent = 0.0;  ///< 100 (standard - memory) / standard; positive = memory better
};

struct ComparisonReport {
  std::vector<CellOutcome> cells;
  std::vector<Improvement> improvements;
  std::optional<double> mean_improvement;
  std::optional<double> max_improvement;
};

/// 100 * (standard_mean - memory_mean) / standard_mean.
double improvement_percent(double standard_mean, double memory_mean);

/// Pairs standard and memory cells with equal replicate counts.
std::vector<Improvement> compute_improvements(const std::vector<CellOutcome>& cells);

/// Runs every replicate of every cell on up to plan.workers threads, then
/// writes <out>/<cell>/run_<r>.csv, <out>/<cell>/stats.csv, <out>/report.csv
/// and <out>/report.txt. A failing run marks its cell failed; other cells
/// are unaffected. Output does not depend on the worker count.
ComparisonReport run_experiment(const ExperimentPlan& plan);

void write_report_csv(const std::filesystem::path& path, const ComparisonReport& report);
void write_report_text(const std::filesystem::path& path, const ComparisonReport& report);

}  // namespace memopt
