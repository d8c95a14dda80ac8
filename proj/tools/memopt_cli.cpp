// Command-line front end: run experiment plans and post-process their output.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "memopt/algorithms/registry.hpp"
#include "memopt/core/errors.hpp"
#include "memopt/harness/csv_io.hpp"
#include "memopt/harness/experiment.hpp"
#include "memopt/problems/registry.hpp"

namespace {

void print_error(const std::string& kind, const std::string& message) {
  const nlohmann::json line{{"kind", kind}, {"message", message}};
  std::cerr << "error: " << line.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memory-assisted metaheuristics for truss optimization"};
  app.require_subcommand(1);

  std::string plan_file;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string memory;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment plan");
  run_cmd->add_option("plan", plan_file, "JSON plan file")->required();
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory (overrides the plan)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Root seed (overrides the plan)");
  auto* workers_opt = run_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  auto* memory_opt = run_cmd->add_option("--memory", memory, "Memory variants to run")
                         ->check(CLI::IsMember({"on", "off", "both"}));

  std::string cell_dir;
  auto* stats_cmd = app.add_subcommand("stats", "Recompute statistics of a cell directory");
  stats_cmd->add_option("cell-dir", cell_dir, "Directory holding run_<r>.csv files")->required();

  std::string pattern;
  std::string plot_out;
  auto* plot_cmd = app.add_subcommand("plotdata", "Merge history files into one long-format table");
  plot_cmd->add_option("glob", pattern, "Glob pattern of history files (quote it)")->required();
  plot_cmd->add_option("--out", plot_out, "Write to this file instead of stdout");

  auto* list_problems = app.add_subcommand("list-problems", "List benchmark problems");
  auto* list_algorithms = app.add_subcommand("list-algorithms", "List algorithms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*run_cmd) {
      memopt::PlanOverrides overrides;
      if (*out_opt) overrides.out_dir = out_dir;
      if (*seed_opt) overrides.seed = seed;
      if (*workers_opt) overrides.workers = workers;
      if (*memory_opt) {
        overrides.memory = memory == "on" ? memopt::MemoryMode::on
                           : memory == "off" ? memopt::MemoryMode::off
                                             : memopt::MemoryMode::both;
      }
      const auto plan = memopt::load_plan(plan_file, overrides);
      const auto report = memopt::run_experiment(plan);
      std::ifstream text(plan.out_dir / "report.txt");
      std::cout << text.rdbuf();
      std::string failed;
      for (const auto& c : report.cells) {
        if (!c.ok) failed += (failed.empty() ? "" : "; ") + c.spec.id() + ": " + c.error;
      }
      if (!failed.empty()) {
        print_error("evaluation", "failed cells: " + failed);
        return 1;
      }
    } else if (*stats_cmd) {
      memopt::write_stats(std::cout, memopt::stats_from_cell_dir(cell_dir));
    } else if (*plot_cmd) {
      const auto files = memopt::expand_glob(pattern);
      if (plot_out.empty()) {
        memopt::emit_plot_data(files, std::cout);
      } else {
        std::ofstream out(plot_out, std::ios::binary | std::ios::trunc);
        if (!out) throw memopt::ConfigError("cannot write " + plot_out);
        memopt::emit_plot_data(files, out);
      }
    } else if (*list_problems) {
      for (const auto& name : memopt::problem_names()) std::cout << name << '\n';
    } else if (*list_algorithms) {
      for (const auto& name : memopt::algorithm_names()) std::cout << name << '\n';
    }
  } catch (const memopt::Error& e) {
    print_error(e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
