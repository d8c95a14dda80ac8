// Python bindings: problem evaluation, single runs and experiment plans.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "memopt/algorithms/registry.hpp"
#include "memopt/core/errors.hpp"
#include "memopt/core/runner.hpp"
#include "memopt/harness/experiment.hpp"
#include "memopt/problems/registry.hpp"

namespace py = pybind11;
using namespace memopt;

namespace {

ProblemOptions options(std::size_t dim, const std::optional<std::filesystem::path>& data_dir) {
  ProblemOptions o;
  o.dim = dim;
  o.data_dir = data_dir;
  return o;
}

py::dict candidate_dict(const Candidate& c) {
  py::dict d;
  d["position"] = c.position;
  d["objective"] = c.objective;
  d["violations"] = c.violations;
  d["fitness"] = c.fitness;
  d["feasible"] = c.feasible();
  return d;
}

py::dict run_dict(const RunResult& r) {
  py::dict d;
  d["best"] = candidate_dict(r.best);
  py::list history;
  for (const auto& h : r.history) history.append(py::make_tuple(h.iteration, h.best_so_far, h.nfes));
  d["history"] = history;
  d["nfes"] = r.nfes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_memopt, m) {
  m.doc() = "Memory-assisted metaheuristics for truss optimization";

  auto base = py::register_exception<Error>(m, "MemoptError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", base.ptr());

  m.def("list_problems", &problem_names);
  m.def("list_algorithms", &algorithm_names);
  m.def("replicate_seed", &replicate_seed, py::arg("root"), py::arg("algorithm"), py::arg("problem"),
        py::arg("replicate"));

  py::class_<Problem, std::shared_ptr<Problem>>(m, "Problem")
      .def_property_readonly("name", &Problem::name)
      .def_property_readonly("dim", [](const Problem& p) { return p.space().dim(); })
      .def_property_readonly("lower", [](const Problem& p) { return p.space().lower(); })
      .def_property_readonly("upper", [](const Problem& p) { return p.space().upper(); })
      .def("evaluate", [](const Problem& p, const std::vector<double>& x) {
        if (x.size() != p.space().dim()) throw ContractError("expected " + std::to_string(p.space().dim()) + " variables");
        const Evaluation e = p.evaluate(x);
        return py::make_tuple(e.objective, e.violations);
      })
      .def("decode", [](const Problem& p, const std::vector<double>& x) { return p.decode(x); });

  m.def(
      "make_problem",
      [](const std::string& name, std::size_t dim, std::optional<std::filesystem::path> data_dir) {
        return std::shared_ptr<Problem>(make_problem(name, options(dim, data_dir)));
      },
      py::arg("name"), py::arg("dim") = 10, py::arg("data_dir") = py::none());

  m.def(
      "run",
      [](const std::string& algorithm, const std::string& problem, std::size_t population, std::size_t iterations,
         bool memory, std::uint64_t seed, std::size_t dim, std::optional<std::filesystem::path> data_dir) {
        AlgorithmSpec spec;
        spec.name = algorithm;
        const auto p = make_problem(problem, options(dim, data_dir));
        RunConfig cfg;
        cfg.population_size = population;
        cfg.max_iterations = iterations;
        cfg.memory_enabled = memory;
        cfg.seed = seed;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(*make_algorithm(spec), *p, cfg);
        }
        return run_dict(r);
      },
      py::arg("algorithm"), py::arg("problem"), py::arg("population") = 50, py::arg("iterations") = 100,
      py::arg("memory") = true, py::arg("seed") = 0, py::arg("dim") = 10, py::arg("data_dir") = py::none());

  m.def(
      "run_plan",
      [](const std::filesystem::path& plan_file, std::optional<std::filesystem::path> out,
         std::optional<std::uint64_t> seed, std::optional<std::size_t> workers) {
        PlanOverrides o;
        o.out_dir = out;
        o.seed = seed;
        o.workers = workers;
        const auto plan = load_plan(plan_file, o);
        ComparisonReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(plan);
        }
        py::list cells;
        for (const auto& c : report.cells) {
          py::dict d;
          d["id"] = c.spec.id();
          d["ok"] = c.ok;
          d["error"] = c.error;
          d["best"] = c.stats.best;
          d["mean"] = c.stats.mean;
          d["worst"] = c.stats.worst;
          d["std"] = c.stats.std;
          d["runs"] = c.stats.runs;
          cells.append(d);
        }
        return cells;
      },
      py::arg("plan"), py::arg("out") = py::none(), py::arg("seed") = py::none(), py::arg("workers") = py::none());
}
