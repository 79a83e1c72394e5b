#include "vnfp/services_io.hpp"

#include <stdexcept>

namespace vnfp {

using nlohmann::json;

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) it->get_to(out);
}

template <typename T>
void read_range(const json& j, const char* key, Range<T>& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_array() || it->size() != 2) {
    throw std::invalid_argument(std::string("'") + key + "' must be a [lo, hi] pair");
  }
  (*it)[0].get_to(out.lo);
  (*it)[1].get_to(out.hi);
}

}  // namespace

void to_json(json& j, const ModelConfig& cfg) {
  j = json{{"switch_rate", cfg.switch_rate},
           {"vswitch_rate", cfg.vswitch_rate},
           {"queue_capacity", cfg.queue_capacity},
           {"server_active", cfg.server_active},
           {"server_idle", cfg.server_idle},
           {"switch_active", cfg.switch_active},
           {"switch_idle", cfg.switch_idle},
           {"constant_wait", cfg.constant_wait},
           {"constant_loss", cfg.constant_loss},
           {"tolerance", cfg.tolerance},
           {"max_iterations", cfg.max_iterations}};
}

void from_json(const json& j, ModelConfig& cfg) {
  read_if(j, "switch_rate", cfg.switch_rate);
  read_if(j, "vswitch_rate", cfg.vswitch_rate);
  read_if(j, "queue_capacity", cfg.queue_capacity);
  read_if(j, "server_active", cfg.server_active);
  read_if(j, "server_idle", cfg.server_idle);
  read_if(j, "switch_active", cfg.switch_active);
  read_if(j, "switch_idle", cfg.switch_idle);
  read_if(j, "constant_wait", cfg.constant_wait);
  read_if(j, "constant_loss", cfg.constant_loss);
  read_if(j, "tolerance", cfg.tolerance);
  read_if(j, "max_iterations", cfg.max_iterations);
}

void to_json(json& j, const VnfKind& kind) {
  j = json{{"size", kind.size}, {"service_rate", kind.service_rate}};
}

void from_json(const json& j, VnfKind& kind) {
  read_if(j, "size", kind.size);
  read_if(j, "service_rate", kind.service_rate);
}

void to_json(json& j, const ServiceSpec& spec) {
  j = json{{"chain", spec.chain}, {"arrival_rate", spec.arrival_rate}};
}

void from_json(const json& j, ServiceSpec& spec) {
  read_if(j, "chain", spec.chain);
  read_if(j, "arrival_rate", spec.arrival_rate);
}

void to_json(json& j, const ProblemParams& params) {
  j = json{{"services", params.n_services},
           {"chain_length", {params.chain_length.lo, params.chain_length.hi}},
           {"vnf_size", {params.vnf_size.lo, params.vnf_size.hi}},
           {"vnf_rate", {params.vnf_rate.lo, params.vnf_rate.hi}},
           {"arrival_rate", {params.arrival_rate.lo, params.arrival_rate.hi}},
           {"server_capacity", params.server_capacity}};
}

void from_json(const json& j, ProblemParams& params) {
  read_if(j, "services", params.n_services);
  read_range(j, "chain_length", params.chain_length);
  read_range(j, "vnf_size", params.vnf_size);
  read_range(j, "vnf_rate", params.vnf_rate);
  read_range(j, "arrival_rate", params.arrival_rate);
  read_if(j, "server_capacity", params.server_capacity);
}

json genotype_to_json(const Genotype& genotype) {
  json instances = json::array();
  for (ServerId s = 0; s < genotype.n_servers(); ++s) {
    for (auto service : genotype.instances(s)) instances.push_back({s, service});
  }
  return json{{"n_servers", genotype.n_servers()}, {"instances", std::move(instances)}};
}

Genotype genotype_from_json(const json& j) {
  Genotype g(j.at("n_servers").get<std::size_t>());
  for (const auto& pair : j.at("instances")) {
    if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("genotype instance must be [server, service]");
    const auto server = pair[0].get<ServerId>();
    if (server >= g.n_servers()) throw std::invalid_argument("genotype instance on unknown server");
    g.add(server, pair[1].get<std::uint32_t>());
  }
  return g;
}

json problem_to_json(const ProblemInstance& problem) {
  json j;
  j["topology_hash"] = problem.topology ? problem.topology->hash() : 0;
  j["server_capacity"] = problem.server_capacity;
  j["vnfs"] = problem.vnfs;
  j["services"] = problem.services;
  j["model"] = problem.model;
  return j;
}

ProblemInstance problem_from_json(const json& j, std::shared_ptr<const Topology> topology,
                                  std::shared_ptr<const TableSet> tables) {
  ProblemInstance p;
  p.topology = std::move(topology);
  p.tables = std::move(tables);
  if (!p.topology) throw std::invalid_argument("problem_from_json needs a topology");
  if (auto it = j.find("topology_hash"); it != j.end() && it->get<std::uint64_t>() != p.topology->hash()) {
    throw std::invalid_argument("problem document was written for a different topology");
  }
  read_if(j, "server_capacity", p.server_capacity);
  read_if(j, "vnfs", p.vnfs);
  read_if(j, "services", p.services);
  read_if(j, "model", p.model);
  p.validate();
  return p;
}

}  // namespace vnfp
