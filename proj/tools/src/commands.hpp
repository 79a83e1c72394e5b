#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "experiment.hpp"
#include "vnfp/routing_tables.hpp"
#include "vnfp/topology.hpp"

namespace vnfp::cli {

struct GenOptions {
  TopologyKind kind;
  std::filesystem::path out;  // empty: <output dir>/<family>-<size>.vnfg
  bool edge_list = false;     // write the text edge list instead of the binary file
};

/// Builds, validates and writes a topology; prints the component counts.
/// Returns the path written.
std::filesystem::path cmd_gen(const GenOptions& options, std::ostream& out);

struct TablesOptions {
  std::filesystem::path topology;
  std::uint32_t cache_size = 64;
  BfsMode bfs = BfsMode::stochastic;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::filesystem::path out;  // empty: topology path with extension .vnft
};

/// Builds forwarding tables and distance caches, writes them, reloads the
/// file to confirm it round-trips and prints the memory comparison.
TableMemory cmd_tables(const TablesOptions& options, std::ostream& out);

struct RunSummary {
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  std::size_t evaluations = 0;
  std::size_t initial_archive = 0;
  std::size_t final_archive = 0;
  double seconds = 0.0;
  std::filesystem::path initial_path;
  std::filesystem::path final_path;
};

/// Runs one optimization per repetition and writes, per repetition,
/// problem-rNNN.json, initial-rNNN.jsonl (whole initial population) and
/// final-rNNN.jsonl, plus config.json and run.log in the output directory.
std::vector<RunSummary> cmd_solve(const ExperimentConfig& config, std::ostream& log);

struct ReportRow {
  std::string file;
  std::string archive;
  std::uint64_t repetition = 0;
  std::string model;
  std::size_t size = 0;
  double feasible_rate = 0.0;
  std::size_t excluded_infinite = 0;
  double hv = 0.0;
};

/// Hypervolume of every archive's feasible non-dominated finite points,
/// normalized with bounds taken from the union of all given archives and
/// measured against 1.1 per objective. Mixed arities throw
/// std::invalid_argument; empty archives score 0 with a warning.
std::vector<ReportRow> compute_report(std::span<const std::filesystem::path> files, std::ostream& warn);

/// CSV: file,archive,repetition,model,size,feasible_rate,excluded_infinite,hv
void cmd_report(std::span<const std::filesystem::path> files, std::ostream& out, std::ostream& warn);
/// CSV: file,hv
void cmd_hv(std::span<const std::filesystem::path> files, std::ostream& out, std::ostream& warn);

}  // namespace vnfp::cli
