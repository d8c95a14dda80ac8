#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

#include "memopt/core/errors.hpp"
#include "memopt/harness/csv_io.hpp"
#include "memopt/harness/experiment.hpp"

using namespace memopt;
namespace fs = std::filesystem;

namespace {

/// Fresh, empty scratch directory removed on scope exit.
struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("memopt-" + tag + "-" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Every regular file under `root`, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

const char* kSpherePlan = R"({
  "algorithm": ["bbo", "teo"],
  "problem": "sphere",
  "dim": 3,
  "population_size": 10,
  "max_iterations": 15,
  "replicates": 2,
  "memory_enabled": "both",
  "seed": 5
})";

}  // namespace

TEST_CASE("plan parsing builds one cell per algorithm x problem x memory flag") {
  const ExperimentPlan plan = parse_plan(kSpherePlan, "plan.json");
  REQUIRE(plan.cells.size() == 4);
  std::set<std::string> ids;
  for (const auto& c : plan.cells) {
    ids.insert(c.id());
    CHECK(c.config.population_size == 10);
    CHECK(c.config.max_iterations == 15);
    CHECK(c.config.replicate_count == 2);
    CHECK(c.config.seed == 5);
  }
  CHECK(ids.count("bbo-sphere-memory") == 1);
  CHECK(ids.count("teo-sphere-standard") == 1);
  CHECK(plan.problem_options.dim == 3);
}

TEST_CASE("command-line overrides win over the plan") {
  PlanOverrides o;
  o.memory = MemoryMode::off;
  o.seed = 77;
  o.workers = 3;
  o.out_dir = "elsewhere";
  const ExperimentPlan plan = parse_plan(kSpherePlan, "plan.json", o);
  CHECK(plan.cells.size() == 2);
  for (const auto& c : plan.cells) {
    CHECK_FALSE(c.config.memory_enabled);
    CHECK(c.config.seed == 77);
  }
  CHECK(plan.workers == 3);
  CHECK(plan.out_dir == fs::path("elsewhere"));
}

TEST_CASE("NFE budgets become iteration counts") {
  const ExperimentPlan plan = parse_plan(
      R"({"algorithm": ["bbo", "kha", "teo"], "problem": "michell", "population_size": 50, "nfe_budget": 4000})",
      "budget.json");
  REQUIRE(plan.cells.size() == 3);
  CHECK(plan.cells[0].config.max_iterations == 79);
  CHECK(plan.cells[1].config.max_iterations == 79);
  CHECK(plan.cells[2].config.max_iterations == 158);
}

TEST_CASE("plan errors are configuration errors") {
  CHECK_THROWS_AS(parse_plan("{", "p.json"), ConfigError);
  CHECK_THROWS_AS(parse_plan(R"({"algorithm": "bbo", "problem": "sphere", "typo": 1})", "p.json"), ConfigError);
  CHECK_THROWS_AS(parse_plan(R"({"algorithm": "gwo", "problem": "sphere"})", "p.json"), ConfigError);
  CHECK_THROWS_AS(parse_plan(R"({"algorithm": "bbo", "problem": "moon"})", "p.json"), ConfigError);
  CHECK_THROWS_AS(parse_plan(R"({"algorithm": "teo", "problem": "sphere", "population_size": 7})", "p.json"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_plan(R"({"algorithm": "bbo", "problem": "sphere", "max_iterations": 5, "nfe_budget": 500})", "p.json"),
      ConfigError);
  CHECK_THROWS_AS(parse_plan(R"({"algorithm": ["bbo", "bbo"], "problem": "sphere"})", "p.json"), ConfigError);
  CHECK_THROWS_AS(load_plan("/nonexistent/plan.json"), ConfigError);
}

TEST_CASE("replicate seeds are paired and independent of other cells") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  const std::uint64_t s = replicate_seed(5, "bbo", "sphere", 0);
  CHECK(s == (5 ^ splitmix64(fnv1a64("bbo/sphere#0"))));
  CHECK(s != replicate_seed(5, "bbo", "sphere", 1));
  CHECK(s != replicate_seed(5, "kha", "sphere", 0));
  CHECK(s != replicate_seed(6, "bbo", "sphere", 0));

  // Standard and memory cells of one pair see identical seeds, whatever else is in the plan.
  const ExperimentPlan a = parse_plan(kSpherePlan, "a.json");
  const ExperimentPlan b = parse_plan(
      R"({"algorithm": "bbo", "problem": ["sphere", "rastrigin"], "population_size": 30, "seed": 5})", "b.json");
  CHECK(a.cells[0].config.seed == b.cells[0].config.seed);
  CHECK(replicate_seed(a.cells[0].config.seed, "bbo", "sphere", 1) ==
        replicate_seed(b.cells[0].config.seed, "bbo", "sphere", 1));
}

TEST_CASE("improvement percentage sign convention") {
  CHECK(improvement_percent(100.0, 90.0) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(improvement_percent(100.0, 110.0) == doctest::Approx(-10.0).epsilon(1e-12));
  CHECK_THROWS_AS(improvement_percent(0.0, 1.0), ContractError);
}

TEST_CASE("one cell with two replicates writes two histories, one stats file and the report") {
  ScratchDir dir("files");
  ExperimentPlan plan = parse_plan(
      R"({"algorithm": "kha", "problem": "sphere", "dim": 2, "population_size": 8, "max_iterations": 10,
          "replicates": 2, "memory_enabled": true})",
      "one.json");
  plan.out_dir = dir.path;
  const ComparisonReport report = run_experiment(plan);
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].ok);
  const fs::path cell = dir.path / "kha-sphere-memory";
  std::size_t histories = 0, stats = 0;
  for (const auto& e : fs::directory_iterator(cell)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("run_", 0) == 0) ++histories;
    if (name == "stats.csv") ++stats;
  }
  CHECK(histories == 2);
  CHECK(stats == 1);
  CHECK(fs::exists(dir.path / "report.csv"));
  CHECK(fs::exists(dir.path / "report.txt"));
  CHECK(slurp(cell / "run_0.csv").rfind(kHistoryHeader, 0) == 0);
  CHECK(count_lines(slurp(cell / "run_0.csv")) == 12);
}

TEST_CASE("rerunning a plan reproduces every byte, for any worker count") {
  ScratchDir dir("determinism");
  ExperimentPlan plan = parse_plan(kSpherePlan, "plan.json");
  plan.out_dir = dir.path / "out";
  run_experiment(plan);
  const auto first = snapshot(plan.out_dir);
  run_experiment(plan);
  CHECK(snapshot(plan.out_dir) == first);
  plan.workers = 3;
  run_experiment(plan);
  CHECK(snapshot(plan.out_dir) == first);
  CHECK(first.size() == 4 * 3 + 2);
}

TEST_CASE("report improvements recompute exactly from the stats files") {
  ScratchDir dir("improve");
  ExperimentPlan plan = parse_plan(kSpherePlan, "plan.json");
  plan.out_dir = dir.path;
  const ComparisonReport report = run_experiment(plan);
  REQUIRE(report.improvements.size() == 2);
  for (const Improvement& imp : report.improvements) {
    const auto standard = read_stats(dir.path / (imp.algorithm + "-sphere-standard") / "stats.csv");
    const auto memory = read_stats(dir.path / (imp.algorithm + "-sphere-memory") / "stats.csv");
    CHECK(improvement_percent(standard.mean, memory.mean) == imp.percent);

    const auto recomputed = stats_from_cell_dir(dir.path / (imp.algorithm + "-sphere-memory"));
    CHECK(recomputed.mean == memory.mean);
    CHECK(recomputed.std == memory.std);
    CHECK(recomputed.runs == memory.runs);
  }
  const std::string csv = slurp(dir.path / "report.csv");
  CHECK(csv.find(format_double(report.improvements[0].percent)) != std::string::npos);
}

TEST_CASE("a failing cell is reported without stopping the others") {
  ScratchDir dir("failing");
  ExperimentPlan plan = parse_plan(R"({"algorithm": "bbo", "problem": ["sphere", "michell"],
      "population_size": 6, "max_iterations": 2, "replicates": 1, "memory_enabled": false})", "f.json");
  plan.out_dir = dir.path / "out";
  plan.problem_options.data_dir = dir.path / "no-data";
  CHECK_THROWS_AS(run_experiment(plan), ConfigError);  // problems are built before any run

  // A cell whose runs throw is marked failed; the plan itself survives.
  plan.problem_options.data_dir.reset();
  plan.cells[0].config.max_iterations = 3;
  plan.cells[1].algorithm.bbo.max_mutation = 2.0;  // rejected when the run builds its algorithm
  const ComparisonReport report = run_experiment(plan);
  CHECK(report.cells[0].ok);
  CHECK_FALSE(report.cells[1].ok);
  CHECK_FALSE(report.cells[1].error.empty());
  CHECK(slurp(plan.out_dir / "report.csv").find("failed") != std::string::npos);
}

TEST_CASE("history and stats files round-trip") {
  ScratchDir dir("roundtrip");
  const std::vector<HistoryPoint> h{{0, 3.0000000000000004, 10}, {1, 1.0 / 3.0, 20}, {2, 1e-300, 30}};
  write_history(dir.path / "run_0.csv", h);
  const auto back = read_history(dir.path / "run_0.csv");
  REQUIRE(back.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(back[k].iteration == h[k].iteration);
    CHECK(back[k].best_so_far == h[k].best_so_far);
    CHECK(back[k].nfes == h[k].nfes);
  }
  const ReplicateStats s{1.0 / 7.0, 2.5, 4.0, std::sqrt(2.0), 15.0, 3};
  write_stats(dir.path / "stats.csv", s);
  const auto t = read_stats(dir.path / "stats.csv");
  CHECK(t.best == s.best);
  CHECK(t.std == s.std);
  CHECK(t.runs == 3);
}

TEST_CASE("malformed history files name the file and line") {
  ScratchDir dir("malformed");
  const fs::path bad = dir.path / "run_0.csv";
  std::ofstream(bad) << kHistoryHeader << "\n0,1.5,10\n1,oops,20\n";
  try {
    read_history(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(bad.string() + ":3") != std::string::npos);
  }
  std::ofstream(dir.path / "run_1.csv") << "wrong,header\n";
  CHECK_THROWS_AS(read_history(dir.path / "run_1.csv"), ParseError);
  std::ostringstream sink;
  CHECK_THROWS_AS(emit_plot_data({bad}, sink), ParseError);
  CHECK_THROWS_AS(expand_glob((dir.path / "*.none").string()), ConfigError);
}

TEST_CASE("plot data merges histories into one long table") {
  ScratchDir dir("plot");
  std::vector<HistoryPoint> h;
  for (std::size_t g = 0; g < 50; ++g) h.push_back({g, 100.0 / (1.0 + g), 10 * (g + 1)});
  fs::create_directories(dir.path / "solo");
  write_history(dir.path / "solo" / "run_0.csv", h);
  std::ostringstream one;
  emit_plot_data({dir.path / "solo" / "run_0.csv"}, one);
  CHECK(count_lines(one.str()) == 51);
  CHECK(one.str().rfind(std::string(kPlotHeader) + "\n", 0) == 0);

  ExperimentPlan plan = parse_plan(
      R"({"algorithm": "bbo", "problem": ["sphere", "rastrigin"], "dim": 2, "population_size": 6,
          "max_iterations": 8, "replicates": 2, "memory_enabled": true})",
      "plot.json");
  plan.out_dir = dir.path / "out";
  run_experiment(plan);
  std::ostringstream merged;
  emit_plot_data(expand_glob((plan.out_dir / "*" / "run_*.csv").string()), merged);

  std::istringstream rows(merged.str());
  std::string line;
  std::getline(rows, line);
  std::map<std::pair<std::string, std::string>, double> last;
  std::size_t data_rows = 0;
  while (std::getline(rows, line)) {
    ++data_rows;
    std::istringstream fields(line);
    std::string cell, run, iter, best, nfes;
    std::getline(fields, cell, ',');
    std::getline(fields, run, ',');
    std::getline(fields, iter, ',');
    std::getline(fields, best, ',');
    const double value = std::stod(best);
    const auto key = std::make_pair(cell, run);
    if (last.count(key)) CHECK(value <= last[key]);
    last[key] = value;
  }
  CHECK(last.size() == 4);
  CHECK(data_rows == 4 * 9);
}
