#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "vnfp/topology.hpp"

namespace vnfp {

/// Destinations [lo, hi] are reached via next_hop.
struct RouteRow {
  ServerId lo = 0;
  ServerId hi = 0;
  ComponentId next_hop = 0;

  bool operator==(const RouteRow&) const = default;
  auto operator<=>(const RouteRow&) const = default;
};

/// Range-aggregated forwarding table of one component.
///
/// Equal-cost next hops are stored as separate rows over (possibly
/// overlapping) ranges; a lookup returns every matching next hop. Rows are
/// kept sorted by (lo, next_hop).
class ForwardingTable {
 public:
  ForwardingTable() = default;
  ForwardingTable(ComponentId owner, std::vector<RouteRow> rows);

  ComponentId owner() const noexcept { return owner_; }
  std::span<const RouteRow> rows() const noexcept { return rows_; }

  /// Appends the sorted, de-duplicated next hops toward `dest` to `out`.
  void lookup(ServerId dest, std::vector<ComponentId>& out) const;
  std::vector<ComponentId> lookup(ServerId dest) const;

  bool operator==(const ForwardingTable& other) const {
    return owner_ == other.owner_ && rows_ == other.rows_;
  }

 private:
  ComponentId owner_ = 0;
  std::vector<RouteRow> rows_;
  // reach_[i] = max hi over rows_[0..i]; lets lookup stop scanning early.
  std::vector<ServerId> reach_;
};

/// Other servers ordered by non-decreasing hop distance from `owner`.
struct DistanceCache {
  ServerId owner = 0;
  std::vector<ServerId> nearest;

  bool operator==(const DistanceCache&) const = default;
};

enum class BfsMode : std::uint8_t { stochastic = 0, deterministic = 1 };
enum class Aggregation : std::uint8_t { on, off };

/// Everything the genotype mapper needs to look up, built once per topology.
struct TableSet {
  std::uint64_t topology_hash = 0;
  std::uint32_t n_servers = 0;
  std::uint32_t cache_size = 0;
  BfsMode bfs = BfsMode::stochastic;
  std::uint64_t seed = 0;
  std::vector<ForwardingTable> forwarding;  // one per component
  std::vector<DistanceCache> distances;     // one per server

  bool operator==(const TableSet&) const = default;
};

std::string_view to_string(BfsMode mode) noexcept;
std::optional<BfsMode> parse_bfs_mode(std::string_view name) noexcept;

struct TableOptions {
  std::uint32_t cache_size = 64;
  BfsMode bfs = BfsMode::stochastic;
  std::uint64_t seed = 0;
  Aggregation aggregation = Aggregation::on;
  /// Worker threads for the distance caches; 0 picks hardware concurrency.
  unsigned threads = 1;
};

/// Flooding construction: every server broadcasts its id; a component records
/// each neighbor that delivered the broadcast over a shortest path (ties kept,
/// longer copies discarded). With Aggregation::on, sequential-id rows toward
/// the same next hop are merged after each server's broadcast.
std::vector<ForwardingTable> build_forwarding_tables(const Topology& topology,
                                                     Aggregation aggregation = Aggregation::on);

/// Merges (a,b,h) and (b+1,c,h) into (a,c,h) until no more merges apply.
/// Overlapping ranges toward the same hop are merged as well.
std::vector<RouteRow> aggregate_rows(std::vector<RouteRow> rows);

/// Non-deterministic BFS: each horizon is drained in uniformly random order,
/// stopping once `n_max` servers (excluding the owner) were collected.
DistanceCache build_distance_cache(const Topology& topology, ServerId owner, std::size_t n_max,
                                   std::mt19937_64& rng);

/// Plain BFS in neighbor-list order, kept for comparison with the stochastic variant.
DistanceCache build_distance_cache_deterministic(const Topology& topology, ServerId owner,
                                                 std::size_t n_max);

TableSet build_table_set(const Topology& topology, const TableOptions& options);

/// Next hops on shortest paths from `at` toward server `dest`; empty iff at == dest.
/// Throws std::out_of_range for a dest that is not a server or an unknown component.
std::vector<ComponentId> next_hops(const TableSet& tables, ComponentId at, ServerId dest);

/// Stored-id accounting: a naive row (destination, hop) costs 2 ids, a range row 3.
struct TableMemory {
  std::uint64_t naive_rows = 0;
  std::uint64_t compressed_rows = 0;

  std::uint64_t naive_ids() const noexcept { return 2 * naive_rows; }
  std::uint64_t compressed_ids() const noexcept { return 3 * compressed_rows; }
  double percent_saved() const noexcept {
    return naive_rows == 0 ? 0.0
                           : 100.0 * (1.0 - static_cast<double>(compressed_ids()) /
                                                static_cast<double>(naive_ids()));
  }
};

TableMemory forwarding_memory(std::span<const ForwardingTable> tables);

inline constexpr std::uint32_t kTableFormatVersion = 1;

/// `VNFT` frame around
///   topology_hash:u64 n_components:u32 n_servers:u32 cache_size:u32 bfs:u8 seed:u64
///   per component: row_count:u32, then rows as (lo:u32 hi:u32 next_hop:u32)
///   per server: cache_len:u32, then ids as u32
/// All integers little-endian; the frame ends with a 64-bit FNV-1a checksum.
std::vector<std::uint8_t> encode_tables(const TableSet& tables);
TableSet decode_tables(std::span<const std::uint8_t> bytes);

void save_tables(const TableSet& tables, const std::filesystem::path& path);
TableSet load_tables(const std::filesystem::path& path);

}  // namespace vnfp
