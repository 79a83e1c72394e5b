#include "experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "vnfp/hash.hpp"
#include "vnfp/services_io.hpp"

namespace vnfp::cli {

using nlohmann::json;

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) it->get_to(out);
}

void read_path(const json& j, const char* key, std::optional<std::filesystem::path>& out) {
  if (auto it = j.find(key); it != j.end()) {
    if (it->is_null()) out.reset();
    else out = it->get<std::string>();
  }
}

json path_or_null(const std::optional<std::filesystem::path>& p) { return p ? json(p->string()) : json(nullptr); }

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, std::string_view where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw std::invalid_argument("unknown key '" + key + "' in " + std::string(where));
  }
}

}  // namespace

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("VNFP_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "vnfp-out";
}

void ExperimentConfig::validate() const {
  if (repetitions == 0) throw std::invalid_argument("repetitions must be >= 1");
  if (table_cache_size == 0) throw std::invalid_argument("tables.nt must be >= 1");
  if (!topology_file && topology.family == TopologyFamily::custom) {
    throw std::invalid_argument("a custom topology needs topology.file");
  }
  search.validate();
  ModelConfig probe;
  from_json(model_overrides, probe);
  probe.validate();
}

json to_json(const ExperimentConfig& c) {
  json problem = c.problem;
  problem["seed"] = c.problem_seed;
  json model = c.model_overrides;
  model["name"] = std::string(to_string(c.search.model));
  return json{
      {"topology",
       {{"family", std::string(to_string(c.topology.family))},
        {"size", c.topology.size},
        {"file", path_or_null(c.topology_file)}}},
      {"tables",
       {{"nt", c.table_cache_size},
        {"bfs", std::string(to_string(c.bfs))},
        {"seed", c.table_seed},
        {"threads", c.table_threads},
        {"file", path_or_null(c.tables_file)}}},
      {"problem", problem},
      {"model", model},
      {"search",
       {{"weights", c.search.n_weights},
        {"subproblems_per_epoch", c.search.subproblems_per_epoch},
        {"processes", c.search.processes},
        {"max_evals", c.search.max_evaluations},
        {"init_population", c.search.init_population},
        {"seed", c.search.seed}}},
      {"output_dir", c.output_dir.string()},
      {"repetitions", c.repetitions},
  };
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  reject_unknown(j, {"topology", "tables", "problem", "model", "search", "output_dir", "repetitions"}, "config");
  ExperimentConfig c;
  c.output_dir = default_output_dir();

  if (auto it = j.find("topology"); it != j.end()) {
    reject_unknown(*it, {"family", "size", "file"}, "topology");
    if (auto f = it->find("family"); f != it->end()) {
      const auto name = f->get<std::string>();
      auto fam = parse_family(name);
      if (!fam) throw std::invalid_argument("unknown topology family '" + name + "'");
      c.topology.family = *fam;
    }
    read_if(*it, "size", c.topology.size);
    read_path(*it, "file", c.topology_file);
  }
  if (auto it = j.find("tables"); it != j.end()) {
    reject_unknown(*it, {"nt", "bfs", "seed", "threads", "file"}, "tables");
    read_if(*it, "nt", c.table_cache_size);
    if (auto b = it->find("bfs"); b != it->end()) {
      const auto name = b->get<std::string>();
      auto mode = parse_bfs_mode(name);
      if (!mode) throw std::invalid_argument("unknown bfs mode '" + name + "'");
      c.bfs = *mode;
    }
    read_if(*it, "seed", c.table_seed);
    read_if(*it, "threads", c.table_threads);
    read_path(*it, "file", c.tables_file);
  }
  if (auto it = j.find("problem"); it != j.end()) {
    reject_unknown(*it,
                   {"services", "chain_length", "vnf_size", "vnf_rate", "arrival_rate", "server_capacity", "seed"},
                   "problem");
    from_json(*it, c.problem);
    read_if(*it, "seed", c.problem_seed);
  }
  if (auto it = j.find("model"); it != j.end()) {
    json overrides = *it;
    if (auto n = overrides.find("name"); n != overrides.end()) {
      const auto name = n->get<std::string>();
      auto model = parse_model(name);
      if (!model) throw std::invalid_argument("unknown objective model '" + name + "'");
      c.search.model = *model;
      overrides.erase("name");
    }
    reject_unknown(overrides,
                   {"switch_rate", "vswitch_rate", "queue_capacity", "server_active", "server_idle", "switch_active",
                    "switch_idle", "constant_wait", "constant_loss", "tolerance", "max_iterations"},
                   "model");
    c.model_overrides = std::move(overrides);
  }
  if (auto it = j.find("search"); it != j.end()) {
    reject_unknown(*it, {"weights", "subproblems_per_epoch", "processes", "max_evals", "init_population", "seed"},
                   "search");
    read_if(*it, "weights", c.search.n_weights);
    read_if(*it, "subproblems_per_epoch", c.search.subproblems_per_epoch);
    read_if(*it, "processes", c.search.processes);
    read_if(*it, "max_evals", c.search.max_evaluations);
    read_if(*it, "init_population", c.search.init_population);
    read_if(*it, "seed", c.search.seed);
  }
  if (auto it = j.find("output_dir"); it != j.end() && !it->is_null()) {
    const auto dir = it->get<std::string>();
    if (!dir.empty()) c.output_dir = dir;
  }
  read_if(j, "repetitions", c.repetitions);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return config_from_json(json::parse(in));
}

void set_key(json& j, std::string_view dotted, std::string_view value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = std::string(value);
  }
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    const std::string key(dotted.substr(start, dot == std::string_view::npos ? dotted.npos : dot - start));
    if (key.empty()) throw std::invalid_argument("bad key path '" + std::string(dotted) + "'");
    if (dot == std::string_view::npos) {
      (*node)[key] = std::move(parsed);
      return;
    }
    node = &(*node)[key];
    if (!node->is_object()) *node = json::object();
    start = dot + 1;
  }
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  // Only result-affecting keys: where outputs go and how many threads build
  // them do not change a single output value.
  json j = to_json(config);
  j.erase("output_dir");
  j["tables"].erase("threads");
  j["search"].erase("processes");
  return fnv1a(j.dump());
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace vnfp::cli
