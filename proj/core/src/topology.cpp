#include "vnfp/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "vnfp/hash.hpp"

namespace vnfp {

std::string_view to_string(TopologyFamily family) noexcept {
  switch (family) {
    case TopologyFamily::fat_tree: return "fat-tree";
    case TopologyFamily::leaf_spine: return "leaf-spine";
    case TopologyFamily::dcell1: return "dcell";
    case TopologyFamily::custom: return "custom";
  }
  return "custom";
}

std::optional<TopologyFamily> parse_family(std::string_view name) noexcept {
  if (name == "fat-tree" || name == "fattree") return TopologyFamily::fat_tree;
  if (name == "leaf-spine" || name == "leafspine") return TopologyFamily::leaf_spine;
  if (name == "dcell" || name == "dcell1") return TopologyFamily::dcell1;
  if (name == "custom") return TopologyFamily::custom;
  return std::nullopt;
}

Topology::Topology(std::vector<Component> components, std::vector<std::vector<ComponentId>> adjacency,
                   std::uint32_t n_servers, TopologyKind kind)
    : components_(std::move(components)),
      adjacency_(std::move(adjacency)),
      n_servers_(n_servers),
      kind_(kind) {
  if (adjacency_.size() != components_.size()) {
    throw std::invalid_argument("adjacency list count does not match component count");
  }
  if (n_servers_ > components_.size()) {
    throw std::invalid_argument("more servers than components");
  }
  for (auto& list : adjacency_) {
    for (ComponentId v : list) {
      if (v >= components_.size()) {
        throw std::invalid_argument("neighbor id " + std::to_string(v) + " out of range");
      }
    }
    std::sort(list.begin(), list.end());
  }
}

std::size_t Topology::link_count() const noexcept {
  std::size_t degree_sum = 0;
  for (const auto& list : adjacency_) degree_sum += list.size();
  return degree_sum / 2;
}

bool Topology::has_link(ComponentId a, ComponentId b) const {
  const auto& list = adjacency_.at(a);
  return std::binary_search(list.begin(), list.end(), b);
}

std::uint64_t Topology::hash() const noexcept {
  Fnv1a h;
  h.update_u64(components_.size()).update_u64(n_servers_);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    h.update_u64(static_cast<std::uint64_t>(components_[i].cls));
    h.update_u64(components_[i].port_count);
    h.update_u64(adjacency_[i].size());
    for (ComponentId v : adjacency_[i]) h.update_u64(v);
  }
  return h.value();
}

namespace {

class GraphBuilder {
 public:
  GraphBuilder(std::uint32_t n_servers, std::uint32_t server_ports, std::uint32_t n_switches,
               std::uint32_t switch_ports)
      : n_servers_(n_servers) {
    const std::uint32_t total = n_servers + n_switches;
    components_.reserve(total);
    for (std::uint32_t i = 0; i < total; ++i) {
      const bool server = i < n_servers;
      components_.push_back({i, server ? ComponentClass::server : ComponentClass::switch_,
                             server ? server_ports : switch_ports});
    }
    adjacency_.resize(total);
  }

  void link(ComponentId a, ComponentId b) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }

  Topology finish(TopologyKind kind) && {
    return Topology(std::move(components_), std::move(adjacency_), n_servers_, kind);
  }

 private:
  std::uint32_t n_servers_;
  std::vector<Component> components_;
  std::vector<std::vector<ComponentId>> adjacency_;
};

}  // namespace

Topology build_fat_tree(std::uint32_t k) {
  if (k < 4 || k % 2 != 0) {
    throw std::invalid_argument("fat-tree port count must be even and >= 4, got " + std::to_string(k));
  }
  const std::uint32_t half = k / 2;
  const std::uint32_t n_servers = k * k * k / 4;
  const std::uint32_t n_edge = k * half;
  const std::uint32_t n_agg = k * half;
  const std::uint32_t n_core = half * half;
  GraphBuilder g(n_servers, 1, n_edge + n_agg + n_core, k);

  // Switch ids: edge switches, then aggregation, then core, all after the servers.
  auto edge = [&](std::uint32_t pod, std::uint32_t e) { return n_servers + pod * half + e; };
  auto agg = [&](std::uint32_t pod, std::uint32_t a) { return n_servers + n_edge + pod * half + a; };
  auto core = [&](std::uint32_t group, std::uint32_t j) {
    return n_servers + n_edge + n_agg + group * half + j;
  };

  for (std::uint32_t pod = 0; pod < k; ++pod) {
    for (std::uint32_t e = 0; e < half; ++e) {
      for (std::uint32_t h = 0; h < half; ++h) {
        // pod-major, then edge-switch-major server numbering
        g.link((pod * half + e) * half + h, edge(pod, e));
      }
      for (std::uint32_t a = 0; a < half; ++a) g.link(edge(pod, e), agg(pod, a));
    }
    for (std::uint32_t a = 0; a < half; ++a) {
      for (std::uint32_t j = 0; j < half; ++j) g.link(agg(pod, a), core(a, j));
    }
  }
  return std::move(g).finish({TopologyFamily::fat_tree, k});
}

Topology build_leaf_spine(std::uint32_t k) {
  if (k < 2 || k % 2 != 0) {
    throw std::invalid_argument("leaf-spine port count must be even and >= 2, got " + std::to_string(k));
  }
  const std::uint32_t half = k / 2;
  const std::uint32_t n_servers = k * half;
  GraphBuilder g(n_servers, 1, k + half, k);
  auto leaf = [&](std::uint32_t i) { return n_servers + i; };
  auto spine = [&](std::uint32_t j) { return n_servers + k + j; };
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t h = 0; h < half; ++h) g.link(i * half + h, leaf(i));
    for (std::uint32_t j = 0; j < half; ++j) g.link(leaf(i), spine(j));
  }
  return std::move(g).finish({TopologyFamily::leaf_spine, k});
}

Topology build_dcell1(std::uint32_t n) {
  if (n < 2) throw std::invalid_argument("dcell port count must be >= 2, got " + std::to_string(n));
  const std::uint32_t cells = n + 1;
  const std::uint32_t n_servers = n * cells;
  GraphBuilder g(n_servers, 2, cells, n);
  auto server = [&](std::uint32_t cell, std::uint32_t j) { return cell * n + j; };
  for (std::uint32_t c = 0; c < cells; ++c) {
    for (std::uint32_t j = 0; j < n; ++j) g.link(server(c, j), n_servers + c);
  }
  // One link per pair of cells: server j of cell i <-> server i of cell j+1, i <= j.
  for (std::uint32_t i = 0; i < cells; ++i) {
    for (std::uint32_t j = i; j < n; ++j) g.link(server(i, j), server(j + 1, i));
  }
  return std::move(g).finish({TopologyFamily::dcell1, n});
}

Topology build_topology(TopologyKind kind) {
  switch (kind.family) {
    case TopologyFamily::fat_tree: return build_fat_tree(kind.size);
    case TopologyFamily::leaf_spine: return build_leaf_spine(kind.size);
    case TopologyFamily::dcell1: return build_dcell1(kind.size);
    case TopologyFamily::custom: break;
  }
  throw std::invalid_argument("custom topologies cannot be generated");
}

std::uint64_t expected_servers(TopologyKind kind) {
  const std::uint64_t s = kind.size;
  switch (kind.family) {
    case TopologyFamily::fat_tree: return s * s * s / 4;
    case TopologyFamily::leaf_spine: return s * s / 2;
    case TopologyFamily::dcell1: return s * (s + 1);
    case TopologyFamily::custom: break;
  }
  throw std::invalid_argument("custom topologies have no server formula");
}

std::vector<std::uint32_t> bfs_distances(const Topology& topology, ComponentId source) {
  constexpr auto kUnreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(topology.size(), kUnreached);
  std::vector<ComponentId> queue;
  queue.reserve(topology.size());
  dist.at(source) = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const ComponentId u = queue[head];
    for (ComponentId v : topology.neighbors(u)) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

ValidationReport validate(const Topology& topology) {
  ValidationReport report;
  const auto components = topology.components();

  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].id != i) {
      report.ids_contiguous = false;
      report.findings.push_back("component at position " + std::to_string(i) + " carries id " +
                                std::to_string(components[i].id));
    }
    const bool should_be_server = i < topology.n_servers();
    if (should_be_server != (components[i].cls == ComponentClass::server)) {
      report.ids_contiguous = false;
      report.findings.push_back("component " + std::to_string(i) +
                                " breaks the servers-first id layout");
    }
  }

  for (ComponentId u = 0; u < components.size(); ++u) {
    const auto nbrs = topology.neighbors(u);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      const ComponentId v = nbrs[j];
      if (v == u) {
        report.simple = false;
        report.findings.push_back("self-loop at " + std::to_string(u));
      }
      if (j > 0 && nbrs[j - 1] == v) {
        report.simple = false;
        report.findings.push_back("duplicate link " + std::to_string(u) + "-" + std::to_string(v));
      }
      if (!topology.has_link(v, u)) {
        report.symmetric = false;
        report.findings.push_back("link " + std::to_string(u) + "->" + std::to_string(v) +
                                  " has no reverse entry");
      }
    }
    const auto ports = components[u].port_count;
    if (ports != 0 && nbrs.size() > ports) {
      report.ports_respected = false;
      report.findings.push_back("component " + std::to_string(u) + " has degree " +
                                std::to_string(nbrs.size()) + " > " + std::to_string(ports) + " ports");
    }
  }

  if (!components.empty()) {
    const auto dist = bfs_distances(topology, 0);
    const auto unreached = std::count(dist.begin(), dist.end(), std::numeric_limits<std::uint32_t>::max());
    if (unreached > 0) {
      report.connected = false;
      report.findings.push_back(std::to_string(unreached) + " components unreachable from component 0");
    }
  }
  return report;
}

}  // namespace vnfp
