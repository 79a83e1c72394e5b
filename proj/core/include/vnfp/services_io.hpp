#pragma once

#include <memory>

#include <nlohmann/json.hpp>

#include "vnfp/services.hpp"

namespace vnfp {

// JSON forms. Readers only override keys that are present, so a partial
// document layered over defaults is valid input.

void to_json(nlohmann::json& j, const ModelConfig& cfg);
void from_json(const nlohmann::json& j, ModelConfig& cfg);

void to_json(nlohmann::json& j, const VnfKind& kind);
void from_json(const nlohmann::json& j, VnfKind& kind);

void to_json(nlohmann::json& j, const ServiceSpec& spec);
void from_json(const nlohmann::json& j, ServiceSpec& spec);

void to_json(nlohmann::json& j, const ProblemParams& params);
void from_json(const nlohmann::json& j, ProblemParams& params);

/// {"n_servers": N, "instances": [[server, service], ...]} in placement order.
nlohmann::json genotype_to_json(const Genotype& genotype);
Genotype genotype_from_json(const nlohmann::json& j);

/// Problem data without the topology and tables; those are referenced by
/// "topology_hash" and re-attached on load (a hash mismatch throws).
nlohmann::json problem_to_json(const ProblemInstance& problem);
ProblemInstance problem_from_json(const nlohmann::json& j, std::shared_ptr<const Topology> topology,
                                  std::shared_ptr<const TableSet> tables);

}  // namespace vnfp
