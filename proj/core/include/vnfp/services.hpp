#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vnfp/model_config.hpp"
#include "vnfp/routing_tables.hpp"
#include "vnfp/topology.hpp"

namespace vnfp {

struct VnfKind {
  double size = 1.0;          // resource units consumed on the host server
  double service_rate = 1.0;  // packets/s of the VNF's queue

  bool operator==(const VnfKind&) const = default;
};

struct ServiceSpec {
  std::vector<std::uint32_t> chain;  // indices into ProblemInstance::vnfs, in traversal order
  double arrival_rate = 0.0;         // external demand, packets/s

  bool operator==(const ServiceSpec&) const = default;
};

/// Immutable problem data shared by all evaluations.
struct ProblemInstance {
  std::shared_ptr<const Topology> topology;
  std::shared_ptr<const TableSet> tables;
  std::vector<VnfKind> vnfs;
  std::vector<ServiceSpec> services;
  double server_capacity = 1.0;
  ModelConfig model;

  /// Throws std::invalid_argument on inconsistent data (missing tables,
  /// table/topology mismatch, oversize VNF, bad rates, dangling chain refs).
  void validate() const;

  std::uint32_t n_servers() const noexcept { return topology ? topology->n_servers() : 0; }

  /// Capacity needed for one instance of every service.
  double min_demand() const noexcept;
  /// Total capacity of the data center.
  double total_capacity() const noexcept { return server_capacity * n_servers(); }
};

/// Per-server multiset of service indices; each entry anchors one service instance.
class Genotype {
 public:
  Genotype() = default;
  explicit Genotype(std::size_t n_servers) : per_server_(n_servers) {}

  std::size_t n_servers() const noexcept { return per_server_.size(); }
  std::size_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }

  std::span<const std::uint32_t> instances(ServerId server) const { return per_server_.at(server); }
  void add(ServerId server, std::uint32_t service);

  /// k-th instance in (server, multiset position) order.
  std::pair<ServerId, std::uint32_t> nth(std::size_t k) const;
  std::pair<ServerId, std::uint32_t> remove_nth(std::size_t k);

  /// Instances per service for a problem with `n_services` services.
  std::vector<std::uint32_t> counts(std::size_t n_services) const;

  bool operator==(const Genotype&) const = default;

 private:
  std::vector<std::vector<std::uint32_t>> per_server_;
  std::size_t total_ = 0;
};

enum class QueueClass : std::uint8_t { switch_queue = 0, vswitch = 1, vnf = 2 };

/// A buffer packets wait in: a physical switch, a server's virtual switch, or
/// the queue of one placed VNF (vnf indexes Placement::vnf_queues).
struct QueueRef {
  ComponentId component = 0;
  QueueClass cls = QueueClass::switch_queue;
  std::uint32_t vnf = 0;

  bool operator==(const QueueRef&) const = default;
};

/// A placed VNF. Queues are never shared between instances.
struct VnfQueue {
  std::uint32_t service = 0;
  std::uint32_t instance = 0;
  std::uint32_t chain_pos = 0;
  std::uint32_t kind = 0;
  ServerId server = 0;

  bool operator==(const VnfQueue&) const = default;
};

struct VnfAssignment {
  std::uint32_t chain_pos = 0;
  ServerId server = 0;

  bool operator==(const VnfAssignment&) const = default;
};

struct ServiceInstance {
  ServerId anchor = 0;
  std::vector<VnfAssignment> assignments;
  std::vector<QueueRef> route;
  double weight = 0.0;  // share of the service's traffic on this instance

  bool operator==(const ServiceInstance&) const = default;
};

/// Phenotype: concrete VNF hosts and routes for every placed instance.
struct Placement {
  std::size_t n_components = 0;
  std::vector<std::vector<ServiceInstance>> services;
  std::vector<VnfQueue> vnf_queues;
  std::vector<double> used_capacity;  // per server
  std::uint32_t dropped_instances = 0;

  /// Switch and virtual-switch queues are indexed by component id, VNF
  /// queues follow at n_components + vnf.
  std::size_t queue_count() const noexcept { return n_components + vnf_queues.size(); }
  std::size_t queue_index(const QueueRef& q) const noexcept {
    return q.cls == QueueClass::vnf ? n_components + q.vnf : q.component;
  }

  bool operator==(const Placement&) const = default;
};

struct Violation {
  enum class Kind : std::uint8_t { link, capacity, ordering, queue_class, weights, missing_service };
  Kind kind = Kind::link;
  std::uint32_t service = 0;
  std::uint32_t instance = 0;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

std::string_view to_string(Violation::Kind kind) noexcept;

struct FeasibilityReport {
  bool feasible = true;
  std::uint32_t unplaced_instances = 0;
  std::uint32_t services_without_instances = 0;
  std::vector<Violation> violations;

  bool operator==(const FeasibilityReport&) const = default;
};

struct MappingResult {
  Placement placement;
  FeasibilityReport report;
};

/// Decodes a genotype. Instances are processed by ascending anchor server,
/// then multiset order. Each chain VNF goes to the current server if it has
/// room, else to the first server with room in the current server's distance
/// cache; the current server then moves to that host. An instance that cannot
/// be fully placed is rolled back and counted as unplaced. Routes join
/// consecutive hosts along shortest paths, breaking ECMP ties uniformly at random.
MappingResult map_genotype(const ProblemInstance& problem, const Genotype& genotype, std::mt19937_64& rng);

/// Re-verifies link adjacency, capacity and chain ordering from raw topology
/// and service data without trusting the mapper.
FeasibilityReport check_constraints(const ProblemInstance& problem, const Placement& placement);

template <typename T>
struct Range {
  T lo{};
  T hi{};
};

struct ProblemParams {
  std::uint32_t n_services = 3;
  Range<std::uint32_t> chain_length{2, 4};
  Range<std::uint32_t> vnf_size{1, 2};
  Range<double> vnf_rate{20.0, 40.0};
  Range<double> arrival_rate{2.0, 8.0};
  double server_capacity = 4.0;
};

/// Deterministic in `seed`. Every chain position gets its own VnfKind, and the
/// model config takes default_model_config() over the drawn VNF rates.
/// Throws std::invalid_argument for empty ranges or VNFs that cannot fit a server.
ProblemInstance random_problem(std::shared_ptr<const Topology> topology,
                               std::shared_ptr<const TableSet> tables, const ProblemParams& params,
                               std::uint64_t seed);

}  // namespace vnfp
