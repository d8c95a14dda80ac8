#include "memopt/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "memopt/core/errors.hpp"
#include "memopt/harness/csv_io.hpp"

namespace memopt {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return obj[key].get<double>();
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + ": '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool get_bool(const json& obj, const char* key, bool fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError(where + ": '" + key + "' must be true or false");
  return obj[key].get<bool>();
}

std::vector<std::string> names(const json& doc, const char* key, const std::string& where) {
  if (!doc.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = doc[key];
  std::vector<std::string> out;
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else if (v.is_array() && !v.empty()) {
    for (const json& s : v) {
      if (!s.is_string()) throw ConfigError(where + ": '" + key + "' entries must be strings");
      out.push_back(s.get<std::string>());
    }
  } else {
    throw ConfigError(where + ": '" + key + "' must be a name or a non-empty list of names");
  }
  return out;
}

bbo::Params parse_bbo(const json& t, const std::string& where) {
  check_keys(t, {"max_immigration", "max_emigration", "max_mutation", "elite_keep"}, where);
  bbo::Params p;
  p.max_immigration = get_number(t, "max_immigration", p.max_immigration, where);
  p.max_emigration = get_number(t, "max_emigration", p.max_emigration, where);
  p.max_mutation = get_number(t, "max_mutation", p.max_mutation, where);
  p.elite_keep = get_count(t, "elite_keep", p.elite_keep, where);
  return p;
}

kha::Params parse_kha(const json& t, const std::string& where) {
  check_keys(t, {"max_induced_speed", "foraging_speed", "max_diffusion_speed", "inertia_induced",
                 "inertia_foraging", "time_constant", "crossover_enabled", "mutation_enabled", "epsilon",
                 "personal_best_uses_food_coefficient"},
             where);
  kha::Params p;
  p.max_induced_speed = get_number(t, "max_induced_speed", p.max_induced_speed, where);
  p.foraging_speed = get_number(t, "foraging_speed", p.foraging_speed, where);
  p.max_diffusion_speed = get_number(t, "max_diffusion_speed", p.max_diffusion_speed, where);
  p.inertia_induced = get_number(t, "inertia_induced", p.inertia_induced, where);
  p.inertia_foraging = get_number(t, "inertia_foraging", p.inertia_foraging, where);
  p.time_constant = get_number(t, "time_constant", p.time_constant, where);
  p.crossover_enabled = get_bool(t, "crossover_enabled", p.crossover_enabled, where);
  p.mutation_enabled = get_bool(t, "mutation_enabled", p.mutation_enabled, where);
  p.epsilon = get_number(t, "epsilon", p.epsilon, where);
  p.personal_best_uses_food_coefficient =
      get_bool(t, "personal_best_uses_food_coefficient", p.personal_best_uses_food_coefficient, where);
  return p;
}

teo::Params parse_teo(const json& t, const std::string& where) {
  check_keys(t, {"c1", "c2", "pro"}, where);
  teo::Params p;
  p.c1 = get_number(t, "c1", p.c1, where);
  p.c2 = get_number(t, "c2", p.c2, where);
  p.pro = get_number(t, "pro", p.pro, where);
  return p;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string CellSpec::id() const {
  return algorithm.name + "-" + problem + "-" + (config.memory_enabled ? "memory" : "standard");
}

ExperimentPlan parse_plan(const std::string& text, const std::string& source, const PlanOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(source + ": plan must be a JSON object");
  check_keys(doc,
             {"algorithm", "problem", "population_size", "max_iterations", "nfe_budget", "memory_enabled",
              "memory_fraction", "seed", "replicates", "dim", "penalty", "out", "workers", "data_dir", "bbo",
              "kha", "teo"},
             source);

  ExperimentPlan plan;
  RunConfig base;
  base.population_size = get_count(doc, "population_size", base.population_size, source);
  base.memory_fraction = get_number(doc, "memory_fraction", base.memory_fraction, source);
  base.replicate_count = get_count(doc, "replicates", base.replicate_count, source);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0)) {
      throw ConfigError(source + ": 'seed' must be a non-negative integer");
    }
    base.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("penalty")) {
    const json& p = doc["penalty"];
    if (!p.is_object()) throw ConfigError(source + ": 'penalty' must be an object");
    check_keys(p, {"exponent", "scale"}, source + ": penalty");
    base.penalty.exponent = get_number(p, "exponent", base.penalty.exponent, source);
    base.penalty.scale = get_number(p, "scale", base.penalty.scale, source);
  }
  if (overrides.seed) base.seed = *overrides.seed;

  const bool has_iters = doc.contains("max_iterations");
  const bool has_budget = doc.contains("nfe_budget");
  if (has_iters && has_budget) throw ConfigError(source + ": give max_iterations or nfe_budget, not both");
  const std::size_t iterations = get_count(doc, "max_iterations", 100, source);
  const std::size_t budget = get_count(doc, "nfe_budget", 0, source);

  MemoryMode mode = MemoryMode::on;
  if (doc.contains("memory_enabled")) {
    const json& m = doc["memory_enabled"];
    if (m.is_boolean()) {
      mode = m.get<bool>() ? MemoryMode::on : MemoryMode::off;
    } else if (m.is_string() && m.get<std::string>() == "both") {
      mode = MemoryMode::both;
    } else {
      throw ConfigError(source + ": 'memory_enabled' must be true, false or \"both\"");
    }
  }
  if (overrides.memory) mode = *overrides.memory;
  std::vector<bool> flags;
  if (mode != MemoryMode::on) flags.push_back(false);
  if (mode != MemoryMode::off) flags.push_back(true);

  AlgorithmSpec tables;
  if (doc.contains("bbo")) tables.bbo = parse_bbo(doc["bbo"], source + ": bbo");
  if (doc.contains("kha")) tables.kha = parse_kha(doc["kha"], source + ": kha");
  if (doc.contains("teo")) tables.teo = parse_teo(doc["teo"], source + ": teo");

  plan.problem_options.dim = get_count(doc, "dim", plan.problem_options.dim, source);
  if (doc.contains("data_dir")) {
    if (!doc["data_dir"].is_string()) throw ConfigError(source + ": 'data_dir' must be a string");
    plan.problem_options.data_dir = doc["data_dir"].get<std::string>();
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) throw ConfigError(source + ": 'out' must be a string");
    plan.out_dir = doc["out"].get<std::string>();
  }
  plan.workers = get_count(doc, "workers", plan.workers, source);
  if (overrides.out_dir) plan.out_dir = *overrides.out_dir;
  if (overrides.workers) plan.workers = *overrides.workers;
  if (plan.workers == 0) throw ConfigError(source + ": workers must be positive");

  const auto& known_problems = problem_names();
  for (const std::string& alg : names(doc, "algorithm", source)) {
    for (const std::string& prob : names(doc, "problem", source)) {
      if (std::find(known_problems.begin(), known_problems.end(), prob) == known_problems.end()) {
        throw ConfigError(source + ": unknown problem '" + prob + "'");
      }
      for (bool memory : flags) {
        CellSpec cell;
        cell.algorithm = tables;
        cell.algorithm.name = alg;
        cell.problem = prob;
        cell.config = base;
        cell.config.memory_enabled = memory;
        const auto instance = make_algorithm(cell.algorithm);  // validates name and parameters
        instance->check_population_size(base.population_size);
        cell.config.max_iterations =
            has_budget ? iterations_for_budget(*instance, base.population_size, budget) : iterations;
        validate(cell.config);
        plan.cells.push_back(std::move(cell));
      }
    }
  }
  std::set<std::string> ids;
  for (const CellSpec& c : plan.cells) {
    if (!ids.insert(c.id()).second) throw ConfigError(source + ": duplicate cell '" + c.id() + "'");
  }
  return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path, const PlanOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open plan file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str(), path.string(), overrides);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t replicate_seed(std::uint64_t root, const std::string& algorithm, const std::string& problem,
                             std::size_t replicate) {
  return root ^ splitmix64(fnv1a64(algorithm + "/" + problem + "#" + std::to_string(replicate)));
}

double improvement_percent(double standard_mean, double memory_mean) {
  if (standard_mean == 0.0) throw ContractError("improvement undefined for a zero standard mean");
  return 100.0 * (standard_mean - memory_mean) / standard_mean;
}

std::vector<Improvement> compute_improvements(const std::vector<CellOutcome>& cells) {
  std::vector<Improvement> out;
  for (const CellOutcome& std_cell : cells) {
    if (std_cell.spec.config.memory_enabled || !std_cell.ok) continue;
    for (const CellOutcome& mem_cell : cells) {
      if (!mem_cell.spec.config.memory_enabled || !mem_cell.ok) continue;
      if (mem_cell.spec.algorithm.name != std_cell.spec.algorithm.name ||
          mem_cell.spec.problem != std_cell.spec.problem) {
        continue;
      }
      if (mem_cell.stats.runs != std_cell.stats.runs || std_cell.stats.mean == 0.0) continue;
      out.push_back({std_cell.spec.algorithm.name, std_cell.spec.problem, std_cell.stats.mean, mem_cell.stats.mean,
                     improvement_percent(std_cell.stats.mean, mem_cell.stats.mean)});
    }
  }
  return out;
}

ComparisonReport run_experiment(const ExperimentPlan& plan) {
  // Problems are immutable and shared by all runs of a cell.
  std::map<std::string, std::unique_ptr<Problem>> problems;
  for (const CellSpec& c : plan.cells) {
    if (!problems.count(c.problem)) problems.emplace(c.problem, make_problem(c.problem, plan.problem_options));
  }

  struct Job {
    std::size_t cell;
    std::size_t replicate;
  };
  std::vector<Job> jobs;
  std::vector<std::vector<std::optional<RunResult>>> results(plan.cells.size());
  std::vector<std::vector<std::string>> errors(plan.cells.size());
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    const std::size_t n = plan.cells[c].config.replicate_count;
    results[c].resize(n);
    errors[c].resize(n);
    for (std::size_t r = 0; r < n; ++r) jobs.push_back({c, r});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const CellSpec& cell = plan.cells[jobs[j].cell];
      RunConfig cfg = cell.config;
      cfg.seed = replicate_seed(cell.config.seed, cell.algorithm.name, cell.problem, jobs[j].replicate);
      try {
        const auto algorithm = make_algorithm(cell.algorithm);
        results[jobs[j].cell][jobs[j].replicate] = run(*algorithm, *problems.at(cell.problem), cfg);
      } catch (const std::exception& e) {
        errors[jobs[j].cell][jobs[j].replicate] = std::string("run ") + std::to_string(jobs[j].replicate) + ": " + e.what();
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(plan.workers, jobs.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ComparisonReport report;
  std::filesystem::create_directories(plan.out_dir);
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    CellOutcome outcome;
    outcome.spec = plan.cells[c];
    const auto dir = plan.out_dir / outcome.spec.id();
    std::filesystem::create_directories(dir);
    std::filesystem::remove(dir / "stats.csv");
    for (std::size_t r = 0; r < results[c].size(); ++r) {
      if (results[c][r]) write_history(dir / ("run_" + std::to_string(r) + ".csv"), results[c][r]->history);
      if (!errors[c][r].empty() && outcome.error.empty()) outcome.error = errors[c][r];
    }
    outcome.ok = outcome.error.empty();
    if (outcome.ok) {
      for (auto& r : results[c]) outcome.runs.push_back(std::move(*r));
      outcome.stats = replicate_stats(outcome.runs);
      write_stats(dir / "stats.csv", outcome.stats);
    }
    report.cells.push_back(std::move(outcome));
  }
  report.improvements = compute_improvements(report.cells);
  if (!report.improvements.empty()) {
    double sum = 0.0;
    double max = report.improvements.front().percent;
    for (const Improvement& i : report.improvements) {
      sum += i.percent;
      max = std::max(max, i.percent);
    }
    report.mean_improvement = sum / static_cast<double>(report.improvements.size());
    report.max_improvement = max;
  }
  write_report_csv(plan.out_dir / "report.csv", report);
  write_report_text(plan.out_dir / "report.txt", report);
  return report;
}

void write_report_csv(const std::filesystem::path& path, const ComparisonReport& report) {
  auto out = open_out(path);
  out << "cell,algorithm,problem,memory,status,best,mean,worst,std,nfes_median,runs,improvement_pct\n";
  for (const CellOutcome& c : report.cells) {
    out << c.spec.id() << ',' << c.spec.algorithm.name << ',' << c.spec.problem << ','
        << (c.spec.config.memory_enabled ? "on" : "off") << ',' << (c.ok ? "ok" : "failed");
    if (c.ok) {
      out << ',' << format_double(c.stats.best) << ',' << format_double(c.stats.mean) << ','
          << format_double(c.stats.worst) << ',' << format_double(c.stats.std) << ','
          << format_double(c.stats.nfes_median) << ',' << c.stats.runs;
    } else {
      out << ",,,,,,";
    }
    out << ',';
    if (c.spec.config.memory_enabled) {
      for (const Improvement& i : report.improvements) {
        if (i.algorithm == c.spec.algorithm.name && i.problem == c.spec.problem) out << format_double(i.percent);
      }
    }
    out << '\n';
  }
}

void write_report_text(const std::filesystem::path& path, const ComparisonReport& report) {
  auto out = open_out(path);
  std::vector<std::string> problems;
  for (const CellOutcome& c : report.cells) {
    if (std::find(problems.begin(), problems.end(), c.spec.problem) == problems.end()) problems.push_back(c.spec.problem);
  }
  char line[256];
  for (const std::string& problem : problems) {
    std::vector<const CellOutcome*> cols;
    for (const CellOutcome& c : report.cells) {
      if (c.spec.problem == problem) cols.push_back(&c);
    }
    out << "Problem: " << problem << '\n';
    std::snprintf(line, sizeof line, "%-8s", "");
    out << line;
    for (const CellOutcome* c : cols) {
      std::snprintf(line, sizeof line, " %18s", (c->spec.algorithm.name + (c->spec.config.memory_enabled ? " memory" : " standard")).c_str());
      out << line;
    }
    out << '\n';
    const char* rows[] = {"Best", "Mean", "Worst", "Std", "NFEs", "Runs"};
    for (int row = 0; row < 6; ++row) {
      std::snprintf(line, sizeof line, "%-8s", rows[row]);
      out << line;
      for (const CellOutcome* c : cols) {
        std::string v = "failed";
        if (c->ok) {
          const ReplicateStats& s = c->stats;
          const double values[] = {s.best, s.mean, s.worst, s.std, s.nfes_median, static_cast<double>(s.runs)};
          v = row >= 4 ? fixed(values[row], 0) : fixed(values[row], 4);
        }
        std::snprintf(line, sizeof line, " %18s", v.c_str());
        out << line;
      }
      out << '\n';
    }
    for (const CellOutcome* c : cols) {
      if (!c->ok) out << "  " << c->spec.id() << " failed: " << c->error << '\n';
    }
    out << '\n';
  }
  if (!report.improvements.empty()) {
    out << "Improvement of memory over standard (positive = memory better)\n";
    for (const Improvement& i : report.improvements) {
      std::snprintf(line, sizeof line, "  %-6s %-12s %8.2f%%\n", i.algorithm.c_str(), i.problem.c_str(), i.percent);
      out << line;
    }
    std::snprintf(line, sizeof line, "  mean %.2f%%, max %.2f%%\n", *report.mean_improvement, *report.max_improvement);
    out << line;
  }
}

}  // namespace memopt
