#include "memopt/harness/csv_io.hpp"

#include <glob.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "memopt/core/errors.hpp"

namespace memopt {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  if (s.empty()) parse_fail(path, line, "empty field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) parse_fail(path, line, "not a number: '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  const double v = parse_number(s, path, line);
  if (!(v >= 0.0) || v != std::floor(v)) parse_fail(path, line, "not a non-negative integer: '" + s + "'");
  return static_cast<std::size_t>(v);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open");
  return in;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_history(std::ostream& out, const std::vector<HistoryPoint>& history) {
  out << kHistoryHeader << '\n';
  for (const HistoryPoint& h : history) {
    out << h.iteration << ',' << format_double(h.best_so_far) << ',' << h.nfes << '\n';
  }
}

void write_history(const std::filesystem::path& path, const std::vector<HistoryPoint>& history) {
  auto out = open_out(path);
  write_history(out, history);
}

std::vector<HistoryPoint> read_history(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kHistoryHeader) {
    parse_fail(path, 1, std::string("expected header '") + kHistoryHeader + "'");
  }
  std::vector<HistoryPoint> out;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 3) parse_fail(path, n, "expected 3 fields, got " + std::to_string(f.size()));
    out.push_back({parse_count(f[0], path, n), parse_number(f[1], path, n), parse_count(f[2], path, n)});
  }
  if (out.empty()) parse_fail(path, n, "no data rows");
  return out;
}

void write_stats(std::ostream& out, const ReplicateStats& s) {
  out << kStatsHeader << '\n'
      << format_double(s.best) << ',' << format_double(s.mean) << ',' << format_double(s.worst) << ','
      << format_double(s.std) << ',' << format_double(s.nfes_median) << ',' << s.runs << '\n';
}

void write_stats(const std::filesystem::path& path, const ReplicateStats& stats) {
  auto out = open_out(path);
  write_stats(out, stats);
}

ReplicateStats read_stats(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kStatsHeader) {
    parse_fail(path, 1, std::string("expected header '") + kStatsHeader + "'");
  }
  if (!std::getline(in, line)) parse_fail(path, 2, "missing statistics row");
  const auto f = split(strip_cr(line));
  if (f.size() != 6) parse_fail(path, 2, "expected 6 fields, got " + std::to_string(f.size()));
  ReplicateStats s;
  s.best = parse_number(f[0], path, 2);
  s.mean = parse_number(f[1], path, 2);
  s.worst = parse_number(f[2], path, 2);
  s.std = parse_number(f[3], path, 2);
  s.nfes_median = parse_number(f[4], path, 2);
  s.runs = parse_count(f[5], path, 2);
  return s;
}

ReplicateStats stats_from_cell_dir(const std::filesystem::path& cell_dir) {
  if (!std::filesystem::is_directory(cell_dir)) throw ConfigError(cell_dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(cell_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("run_", 0) == 0 && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  if (files.empty()) throw ConfigError("no run_*.csv files in " + cell_dir.string());
  std::sort(files.begin(), files.end());
  std::vector<double> bests;
  std::vector<double> nfes;
  for (const auto& f : files) {
    const auto h = read_history(f);
    bests.push_back(h.back().best_so_far);
    nfes.push_back(static_cast<double>(h.back().nfes));
  }
  return replicate_stats(bests, nfes);
}

void emit_plot_data(std::vector<std::filesystem::path> files, std::ostream& out) {
  if (files.empty()) throw ConfigError("plotdata needs at least one history file");
  std::sort(files.begin(), files.end());
  out << kPlotHeader << '\n';
  for (const auto& f : files) {
    const auto history = read_history(f);
    std::string cell = f.parent_path().filename().string();
    if (cell.empty()) cell = ".";
    std::string run = f.stem().string();
    if (run.rfind("run_", 0) == 0) run = run.substr(4);
    for (const HistoryPoint& h : history) {
      out << cell << ',' << run << ',' << h.iteration << ',' << format_double(h.best_so_far) << ',' << h.nfes << '\n';
    }
  }
}

std::vector<std::filesystem::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::filesystem::path> out;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (out.empty()) throw ConfigError("no files match '" + pattern + "'");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace memopt
