#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "memopt/core/runner.hpp"

namespace memopt {

inline constexpr const char* kHistoryHeader = "iteration,best_so_far,nfes";
inline constexpr const char* kStatsHeader = "best,mean,worst,std,nfes_median,runs";
inline constexpr const char* kPlotHeader = "cell,run,iteration,best_so_far,nfes";

/// Shortest round-trip decimal form (%.17g).
std::string format_double(double value);

void write_history(std::ostream& out, const std::vector<HistoryPoint>& history);
void write_history(const std::filesystem::path& path, const std::vector<HistoryPoint>& history);

/// Throws ParseError naming the file and line on malformed content.
std::vector<HistoryPoint> read_history(const std::filesystem::path& path);

void write_stats(std::ostream& out, const ReplicateStats& stats);
void write_stats(const std::filesystem::path& path, const ReplicateStats& stats);
ReplicateStats read_stats(const std::filesystem::path& path);

/// Statistics over the final row of every run_<r>.csv in `cell_dir`.
ReplicateStats stats_from_cell_dir(const std::filesystem::path& cell_dir);

/// Long-format table over history files; the cell is the parent directory
/// name and the run is parsed from run_<r>.csv (else the file stem).
/// Files are emitted in sorted path order.
void emit_plot_data(std::vector<std::filesystem::path> files, std::ostream& out);

/// Sorted matches of a shell glob pattern (ConfigError if none).
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

}  // namespace memopt
