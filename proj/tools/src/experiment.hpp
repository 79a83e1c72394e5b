#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "vnfp/objective_models.hpp"
#include "vnfp/routing_tables.hpp"
#include "vnfp/search.hpp"
#include "vnfp/services.hpp"
#include "vnfp/topology.hpp"

namespace vnfp::cli {

/// Everything `solve` needs. Loaded from JSON; any key can then be replaced
/// with `set_key` (dotted path) or the dedicated flags.
struct ExperimentConfig {
  TopologyKind topology{TopologyFamily::fat_tree, 4};
  std::optional<std::filesystem::path> topology_file;

  std::uint32_t table_cache_size = 64;
  BfsMode bfs = BfsMode::stochastic;
  std::uint64_t table_seed = 0;
  unsigned table_threads = 0;
  std::optional<std::filesystem::path> tables_file;

  ProblemParams problem;
  std::uint64_t problem_seed = 1;

  // Applied on top of the defaults random_problem derives from the VNF rates.
  nlohmann::json model_overrides = nlohmann::json::object();

  SearchConfig search;

  std::filesystem::path output_dir;
  std::size_t repetitions = 1;

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

/// Output directory used when the config does not name one: $VNFP_OUT_DIR,
/// else "vnfp-out".
std::filesystem::path default_output_dir();

nlohmann::json to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults; unknown sections are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Replaces one key, e.g. "search.max_evals" = "500" or
/// "problem.vnf_rate" = "[10, 20]". The value is parsed as JSON, falling back
/// to a plain string.
void set_key(nlohmann::json& j, std::string_view dotted, std::string_view value);

/// Hash of the canonical JSON form minus output location and thread counts;
/// recorded in every output file.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string hex64(std::uint64_t value);

}  // namespace vnfp::cli
