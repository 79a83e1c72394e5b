#include "vnfp/services.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vnfp {

namespace {
// Capacity sums are compared with a small slack so that fractional sizes
// that add up exactly to the capacity are accepted.
constexpr double kCapacitySlack = 1e-9;
}  // namespace

void ProblemInstance::validate() const {
  if (!topology) throw std::invalid_argument("problem has no topology");
  if (!tables) throw std::invalid_argument("problem has no routing tables");
  if (tables->topology_hash != topology->hash()) {
    throw std::invalid_argument("routing tables were built for a different topology");
  }
  if (tables->forwarding.size() != topology->size() || tables->distances.size() != topology->n_servers()) {
    throw std::invalid_argument("routing tables do not cover the topology");
  }
  if (!(server_capacity > 0)) throw std::invalid_argument("server capacity must be positive");
  for (std::size_t v = 0; v < vnfs.size(); ++v) {
    if (!(vnfs[v].size > 0)) throw std::invalid_argument("vnf " + std::to_string(v) + " has non-positive size");
    if (!(vnfs[v].service_rate > 0)) {
      throw std::invalid_argument("vnf " + std::to_string(v) + " has non-positive service rate");
    }
    if (vnfs[v].size > server_capacity + kCapacitySlack) {
      throw std::invalid_argument("vnf " + std::to_string(v) + " exceeds server capacity");
    }
  }
  for (std::size_t s = 0; s < services.size(); ++s) {
    if (services[s].chain.empty()) throw std::invalid_argument("service " + std::to_string(s) + " has an empty chain");
    if (!(services[s].arrival_rate >= 0)) {
      throw std::invalid_argument("service " + std::to_string(s) + " has a negative arrival rate");
    }
    for (auto v : services[s].chain) {
      if (v >= vnfs.size()) throw std::invalid_argument("service " + std::to_string(s) + " references unknown vnf");
    }
  }
  model.validate();
}

double ProblemInstance::min_demand() const noexcept {
  double total = 0.0;
  for (const auto& service : services) {
    for (auto v : service.chain) total += vnfs[v].size;
  }
  return total;
}

void Genotype::add(ServerId server, std::uint32_t service) {
  per_server_.at(server).push_back(service);
  ++total_;
}

std::pair<ServerId, std::uint32_t> Genotype::nth(std::size_t k) const {
  if (k >= total_) throw std::out_of_range("genotype instance index out of range");
  for (ServerId s = 0; s < per_server_.size(); ++s) {
    if (k < per_server_[s].size()) return {s, per_server_[s][k]};
    k -= per_server_[s].size();
  }
  throw std::logic_error("genotype instance count out of sync");
}

std::pair<ServerId, std::uint32_t> Genotype::remove_nth(std::size_t k) {
  if (k >= total_) throw std::out_of_range("genotype instance index out of range");
  for (ServerId s = 0; s < per_server_.size(); ++s) {
    auto& list = per_server_[s];
    if (k < list.size()) {
      const auto service = list[k];
      list.erase(list.begin() + static_cast<std::ptrdiff_t>(k));
      --total_;
      return {s, service};
    }
    k -= list.size();
  }
  throw std::logic_error("genotype instance count out of sync");
}

std::vector<std::uint32_t> Genotype::counts(std::size_t n_services) const {
  std::vector<std::uint32_t> out(n_services, 0);
  for (const auto& list : per_server_) {
    for (auto service : list) {
      if (service < n_services) ++out[service];
    }
  }
  return out;
}

std::string_view to_string(Violation::Kind kind) noexcept {
  switch (kind) {
    case Violation::Kind::link: return "link";
    case Violation::Kind::capacity: return "capacity";
    case Violation::Kind::ordering: return "ordering";
    case Violation::Kind::queue_class: return "queue_class";
    case Violation::Kind::weights: return "weights";
    case Violation::Kind::missing_service: return "missing_service";
  }
  return "unknown";
}

namespace {

QueueRef component_queue(const Topology& topology, ComponentId c) {
  return {c, topology.is_server(c) ? QueueClass::vswitch : QueueClass::switch_queue, 0};
}

class RouteBuilder {
 public:
  RouteBuilder(const Topology& topology, const TableSet& tables, std::mt19937_64& rng)
      : topology_(topology), tables_(tables), rng_(rng) {}

  /// Appends the queues entered on the way from server `from` to server `to`,
  /// excluding `from` itself and ending at `to`'s virtual switch.
  void walk(ServerId from, ServerId to, std::vector<QueueRef>& route) {
    ComponentId at = from;
    while (at != to) {
      hops_.clear();
      tables_.forwarding[at].lookup(to, hops_);
      if (hops_.empty()) throw std::logic_error("forwarding tables have no route toward a server");
      const ComponentId next =
          hops_.size() == 1 ? hops_[0]
                            : hops_[std::uniform_int_distribution<std::size_t>(0, hops_.size() - 1)(rng_)];
      route.push_back(component_queue(topology_, next));
      at = next;
    }
  }

 private:
  const Topology& topology_;
  const TableSet& tables_;
  std::mt19937_64& rng_;
  std::vector<ComponentId> hops_;
};

}  // namespace

MappingResult map_genotype(const ProblemInstance& problem, const Genotype& genotype, std::mt19937_64& rng) {
  const Topology& topology = *problem.topology;
  const TableSet& tables = *problem.tables;
  if (genotype.n_servers() != topology.n_servers()) {
    throw std::invalid_argument("genotype server count does not match the topology");
  }

  MappingResult result;
  Placement& pl = result.placement;
  pl.n_components = topology.size();
  pl.services.resize(problem.services.size());
  pl.used_capacity.assign(topology.n_servers(), 0.0);

  RouteBuilder routes(topology, tables, rng);
  std::vector<ServerId> hosts;
  const double capacity = problem.server_capacity + kCapacitySlack;

  for (ServerId anchor = 0; anchor < genotype.n_servers(); ++anchor) {
    for (std::uint32_t service : genotype.instances(anchor)) {
      if (service >= problem.services.size()) {
        throw std::invalid_argument("genotype references unknown service " + std::to_string(service));
      }
      const auto& chain = problem.services[service].chain;
      hosts.clear();
      ServerId current = anchor;
      bool placed = true;
      for (std::uint32_t kind : chain) {
        const double size = problem.vnfs[kind].size;
        ServerId host = current;
        if (pl.used_capacity[host] + size > capacity) {
          placed = false;
          for (ServerId candidate : tables.distances[current].nearest) {
            if (pl.used_capacity[candidate] + size <= capacity) {
              host = candidate;
              placed = true;
              break;
            }
          }
          if (!placed) break;
        }
        pl.used_capacity[host] += size;
        hosts.push_back(host);
        current = host;
      }

      if (!placed) {
        for (std::size_t pos = 0; pos < hosts.size(); ++pos) {
          pl.used_capacity[hosts[pos]] -= problem.vnfs[chain[pos]].size;
        }
        ++pl.dropped_instances;
        continue;
      }

      auto& instances = pl.services[service];
      const auto instance_index = static_cast<std::uint32_t>(instances.size());
      ServiceInstance inst;
      inst.anchor = anchor;
      inst.assignments.reserve(chain.size());
      for (std::uint32_t pos = 0; pos < chain.size(); ++pos) {
        const auto vnf = static_cast<std::uint32_t>(pl.vnf_queues.size());
        pl.vnf_queues.push_back({service, instance_index, pos, chain[pos], hosts[pos]});
        inst.assignments.push_back({pos, hosts[pos]});
        if (pos == 0) {
          inst.route.push_back({hosts[0], QueueClass::vswitch, 0});
        } else {
          // Leave through the previous host's virtual switch, then follow the path.
          inst.route.push_back({hosts[pos - 1], QueueClass::vswitch, 0});
          routes.walk(hosts[pos - 1], hosts[pos], inst.route);
        }
        inst.route.push_back({hosts[pos], QueueClass::vnf, vnf});
      }
      instances.push_back(std::move(inst));
    }
  }

  auto& report = result.report;
  report.unplaced_instances = pl.dropped_instances;
  for (auto& instances : pl.services) {
    if (instances.empty()) {
      ++report.services_without_instances;
      continue;
    }
    const double weight = 1.0 / static_cast<double>(instances.size());
    for (auto& inst : instances) inst.weight = weight;
  }
  report.feasible = report.unplaced_instances == 0 && report.services_without_instances == 0;
  return result;
}

FeasibilityReport check_constraints(const ProblemInstance& problem, const Placement& placement) {
  const Topology& topology = *problem.topology;
  FeasibilityReport report;
  report.unplaced_instances = placement.dropped_instances;
  auto flag = [&report](Violation::Kind kind, std::size_t service, std::size_t instance, std::string detail) {
    report.violations.push_back(
        {kind, static_cast<std::uint32_t>(service), static_cast<std::uint32_t>(instance), std::move(detail)});
  };

  if (placement.services.size() != problem.services.size()) {
    flag(Violation::Kind::missing_service, 0, 0, "placement covers a different number of services");
  }

  std::vector<double> demand(topology.n_servers(), 0.0);
  for (std::size_t q = 0; q < placement.vnf_queues.size(); ++q) {
    const auto& vq = placement.vnf_queues[q];
    if (vq.server >= topology.n_servers() || vq.kind >= problem.vnfs.size()) {
      flag(Violation::Kind::queue_class, vq.service, vq.instance, "vnf queue " + std::to_string(q) + " is not on a server");
      continue;
    }
    demand[vq.server] += problem.vnfs[vq.kind].size;
  }
  for (ServerId s = 0; s < topology.n_servers(); ++s) {
    if (demand[s] > problem.server_capacity + kCapacitySlack) {
      flag(Violation::Kind::capacity, 0, 0,
           "server " + std::to_string(s) + " holds " + std::to_string(demand[s]) + " > capacity");
    }
    if (s < placement.used_capacity.size() && std::abs(placement.used_capacity[s] - demand[s]) > 1e-6) {
      flag(Violation::Kind::capacity, 0, 0, "capacity ledger of server " + std::to_string(s) + " is out of sync");
    }
  }

  const std::size_t n_services = std::min(placement.services.size(), problem.services.size());
  for (std::size_t s = 0; s < n_services; ++s) {
    const auto& instances = placement.services[s];
    const auto& chain = problem.services[s].chain;
    if (instances.empty()) {
      ++report.services_without_instances;
      flag(Violation::Kind::missing_service, s, 0, "service has no placed instance");
      continue;
    }
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const auto& route = instances[i].route;
      weight_sum += instances[i].weight;

      std::size_t next_pos = 0;
      for (std::size_t h = 0; h < route.size(); ++h) {
        const QueueRef& q = route[h];
        if (q.component >= topology.size()) {
          flag(Violation::Kind::queue_class, s, i, "route references unknown component");
          break;
        }
        const bool on_server = topology.is_server(q.component);
        if ((q.cls == QueueClass::switch_queue) == on_server) {
          flag(Violation::Kind::queue_class, s, i,
               "queue class does not match component " + std::to_string(q.component));
        }
        if (h > 0) {
          const ComponentId prev = route[h - 1].component;
          if (prev != q.component && !topology.has_link(prev, q.component)) {
            flag(Violation::Kind::link, s, i,
                 "hop " + std::to_string(prev) + " -> " + std::to_string(q.component) + " is not a link");
          }
        }
        if (q.cls == QueueClass::vnf) {
          if (q.vnf >= placement.vnf_queues.size()) {
            flag(Violation::Kind::queue_class, s, i, "route references unknown vnf queue");
            continue;
          }
          const auto& vq = placement.vnf_queues[q.vnf];
          if (vq.server != q.component) {
            flag(Violation::Kind::queue_class, s, i, "vnf queue visited away from its host");
          }
          if (vq.service != s || vq.instance != i || next_pos >= chain.size() || vq.chain_pos != next_pos ||
              vq.kind != chain[next_pos]) {
            flag(Violation::Kind::ordering, s, i, "vnf visited out of chain order at hop " + std::to_string(h));
          }
          ++next_pos;
        }
      }
      if (next_pos != chain.size()) {
        flag(Violation::Kind::ordering, s, i,
             "route visits " + std::to_string(next_pos) + " of " + std::to_string(chain.size()) + " vnfs");
      }
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
      flag(Violation::Kind::weights, s, 0, "instance weights sum to " + std::to_string(weight_sum));
    }
  }

  report.feasible = report.violations.empty() && report.unplaced_instances == 0 &&
                    report.services_without_instances == 0;
  return report;
}

ProblemInstance random_problem(std::shared_ptr<const Topology> topology, std::shared_ptr<const TableSet> tables,
                               const ProblemParams& params, std::uint64_t seed) {
  if (params.chain_length.lo == 0 || params.chain_length.lo > params.chain_length.hi) {
    throw std::invalid_argument("chain length range is empty");
  }
  if (params.vnf_size.lo == 0 || params.vnf_size.lo > params.vnf_size.hi) {
    throw std::invalid_argument("vnf size range is empty");
  }
  if (!(params.vnf_rate.lo > 0) || params.vnf_rate.lo > params.vnf_rate.hi) {
    throw std::invalid_argument("vnf rate range is empty or non-positive");
  }
  if (params.arrival_rate.lo < 0 || params.arrival_rate.lo > params.arrival_rate.hi) {
    throw std::invalid_argument("arrival rate range is empty or negative");
  }
  if (static_cast<double>(params.vnf_size.hi) > params.server_capacity) {
    throw std::invalid_argument("largest vnf size exceeds server capacity");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> chain_len(params.chain_length.lo, params.chain_length.hi);
  std::uniform_int_distribution<std::uint32_t> size(params.vnf_size.lo, params.vnf_size.hi);
  std::uniform_real_distribution<double> rate(params.vnf_rate.lo, params.vnf_rate.hi);
  std::uniform_real_distribution<double> arrival(params.arrival_rate.lo, params.arrival_rate.hi);

  ProblemInstance p;
  p.topology = std::move(topology);
  p.tables = std::move(tables);
  p.server_capacity = params.server_capacity;
  double max_rate = params.vnf_rate.lo;
  for (std::uint32_t s = 0; s < params.n_services; ++s) {
    ServiceSpec spec;
    const auto len = chain_len(rng);
    for (std::uint32_t j = 0; j < len; ++j) {
      VnfKind kind{static_cast<double>(size(rng)), rate(rng)};
      max_rate = std::max(max_rate, kind.service_rate);
      spec.chain.push_back(static_cast<std::uint32_t>(p.vnfs.size()));
      p.vnfs.push_back(kind);
    }
    spec.arrival_rate = arrival(rng);
    p.services.push_back(std::move(spec));
  }
  p.model = default_model_config(max_rate);
  p.validate();
  return p;
}

}  // namespace vnfp
