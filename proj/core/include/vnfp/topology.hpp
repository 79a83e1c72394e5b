#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vnfp {

/// Dense index into a topology's component sequence.
using ComponentId = std::uint32_t;
/// Servers occupy component ids [0, n_servers).
using ServerId = std::uint32_t;

enum class ComponentClass : std::uint8_t { server = 0, switch_ = 1 };

enum class TopologyFamily : std::uint8_t { fat_tree = 0, leaf_spine = 1, dcell1 = 2, custom = 3 };

std::string_view to_string(TopologyFamily family) noexcept;
/// Accepts the CLI spellings "fat-tree", "leaf-spine", "dcell" (and "dcell1").
std::optional<TopologyFamily> parse_family(std::string_view name) noexcept;

/// Family tag plus its size parameter (k for Fat Tree / Leaf-Spine, n for DCell_1).
struct TopologyKind {
  TopologyFamily family = TopologyFamily::custom;
  std::uint32_t size = 0;

  bool operator==(const TopologyKind&) const = default;
};

struct Component {
  ComponentId id = 0;
  ComponentClass cls = ComponentClass::server;
  /// Physical ports; 0 means "unbounded" and disables the degree check.
  std::uint32_t port_count = 0;

  bool operator==(const Component&) const = default;
};

/// Undirected component graph with servers numbered first.
///
/// The constructor only checks that neighbor ids are in range and sorts each
/// adjacency list; structural properties (connectivity, symmetry, port limits)
/// are reported by validate() so that broken graphs can still be inspected.
class Topology {
 public:
  Topology() = default;
  Topology(std::vector<Component> components, std::vector<std::vector<ComponentId>> adjacency,
           std::uint32_t n_servers, TopologyKind kind);

  std::size_t size() const noexcept { return components_.size(); }
  std::uint32_t n_servers() const noexcept { return n_servers_; }
  std::size_t n_switches() const noexcept { return components_.size() - n_servers_; }
  TopologyKind kind() const noexcept { return kind_; }

  const Component& component(ComponentId id) const { return components_.at(id); }
  std::span<const Component> components() const noexcept { return components_; }
  std::span<const ComponentId> neighbors(ComponentId id) const { return adjacency_.at(id); }
  bool is_server(ComponentId id) const noexcept { return id < n_servers_; }

  /// Number of undirected links (each counted once).
  std::size_t link_count() const noexcept;
  bool has_link(ComponentId a, ComponentId b) const;

  /// Stable content hash over classes, ports and adjacency.
  std::uint64_t hash() const noexcept;

  bool operator==(const Topology&) const = default;

 private:
  std::vector<Component> components_;
  std::vector<std::vector<ComponentId>> adjacency_;
  std::uint32_t n_servers_ = 0;
  TopologyKind kind_;
};

/// k-ary Fat Tree: k^3/4 servers, k^2/4 core switches, k pods of k/2 edge
/// and k/2 aggregation switches. Throws std::invalid_argument for odd k or k < 4.
Topology build_fat_tree(std::uint32_t k);

/// k leaves, k/2 spines, k/2 servers per leaf. Throws for odd or zero k.
Topology build_leaf_spine(std::uint32_t k);

/// DCell_1 built from n-port switches: n+1 cells of n servers each.
/// Throws for n < 2.
Topology build_dcell1(std::uint32_t n);

/// Dispatches on kind.family; custom is rejected.
Topology build_topology(TopologyKind kind);

/// Server count a family produces for a size parameter, without building it.
std::uint64_t expected_servers(TopologyKind kind);

struct ValidationReport {
  bool connected = true;
  bool ids_contiguous = true;
  bool ports_respected = true;
  bool symmetric = true;
  bool simple = true;  // no self-loops, no duplicate links
  std::vector<std::string> findings;

  bool ok() const noexcept {
    return connected && ids_contiguous && ports_respected && symmetric && simple;
  }
};

ValidationReport validate(const Topology& topology);

/// Hop distances from `source` to every component; unreachable entries hold UINT32_MAX.
std::vector<std::uint32_t> bfs_distances(const Topology& topology, ComponentId source);

}  // namespace vnfp
