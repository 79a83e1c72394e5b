#include "vnfp/routing_tables.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

#include "binary_io.hpp"
#include "vnfp/errors.hpp"
#include "vnfp/hash.hpp"

namespace vnfp {

std::string_view to_string(BfsMode mode) noexcept {
  return mode == BfsMode::deterministic ? "deterministic" : "stochastic";
}

std::optional<BfsMode> parse_bfs_mode(std::string_view name) noexcept {
  if (name == "stochastic") return BfsMode::stochastic;
  if (name == "deterministic") return BfsMode::deterministic;
  return std::nullopt;
}

ForwardingTable::ForwardingTable(ComponentId owner, std::vector<RouteRow> rows)
    : owner_(owner), rows_(std::move(rows)) {
  std::sort(rows_.begin(), rows_.end(), [](const RouteRow& a, const RouteRow& b) {
    return std::tie(a.lo, a.next_hop, a.hi) < std::tie(b.lo, b.next_hop, b.hi);
  });
  reach_.reserve(rows_.size());
  ServerId reach = 0;
  for (const auto& row : rows_) {
    if (row.lo > row.hi) throw std::invalid_argument("route row with lo > hi");
    reach = std::max(reach, row.hi);
    reach_.push_back(reach);
  }
}

void ForwardingTable::lookup(ServerId dest, std::vector<ComponentId>& out) const {
  const auto first = out.size();
  auto it = std::upper_bound(rows_.begin(), rows_.end(), dest,
                             [](ServerId d, const RouteRow& row) { return d < row.lo; });
  for (auto i = static_cast<std::size_t>(it - rows_.begin()); i-- > 0;) {
    if (reach_[i] < dest) break;
    if (rows_[i].hi >= dest) out.push_back(rows_[i].next_hop);
  }
  std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
  out.erase(std::unique(out.begin() + static_cast<std::ptrdiff_t>(first), out.end()), out.end());
}

std::vector<ComponentId> ForwardingTable::lookup(ServerId dest) const {
  std::vector<ComponentId> out;
  lookup(dest, out);
  return out;
}

std::vector<RouteRow> aggregate_rows(std::vector<RouteRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const RouteRow& a, const RouteRow& b) {
    return std::tie(a.next_hop, a.lo, a.hi) < std::tie(b.next_hop, b.lo, b.hi);
  });
  std::vector<RouteRow> merged;
  merged.reserve(rows.size());
  for (const auto& row : rows) {
    if (!merged.empty() && merged.back().next_hop == row.next_hop &&
        static_cast<std::uint64_t>(row.lo) <= static_cast<std::uint64_t>(merged.back().hi) + 1) {
      merged.back().hi = std::max(merged.back().hi, row.hi);
    } else {
      merged.push_back(row);
    }
  }
  std::sort(merged.begin(), merged.end(), [](const RouteRow& a, const RouteRow& b) {
    return std::tie(a.lo, a.next_hop) < std::tie(b.lo, b.next_hop);
  });
  return merged;
}

std::vector<ForwardingTable> build_forwarding_tables(const Topology& topology, Aggregation aggregation) {
  const std::size_t n = topology.size();
  constexpr auto kUnreached = std::numeric_limits<std::uint32_t>::max();
  constexpr auto kNoRow = std::numeric_limits<std::size_t>::max();

  std::vector<std::vector<RouteRow>> rows(n);
  // open_row[c][j]: index in rows[c] of the latest row toward the j-th neighbor of c.
  std::vector<std::vector<std::size_t>> open_row(n);
  for (ComponentId c = 0; c < n; ++c) open_row[c].assign(topology.neighbors(c).size(), kNoRow);

  std::vector<std::uint32_t> dist(n);
  std::vector<ComponentId> frontier;
  frontier.reserve(n);

  // Servers broadcast in ascending id order, so a row toward hop h can only
  // ever be extended by the server immediately after its current hi.
  for (ServerId s = 0; s < topology.n_servers(); ++s) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    frontier.clear();
    dist[s] = 0;
    frontier.push_back(s);
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const ComponentId u = frontier[head];
      for (ComponentId v : topology.neighbors(u)) {
        if (dist[v] == kUnreached) {
          dist[v] = dist[u] + 1;
          frontier.push_back(v);
        }
      }
    }

    for (ComponentId c : frontier) {
      if (c == s) continue;
      const auto nbrs = topology.neighbors(c);
      for (std::size_t j = 0; j < nbrs.size(); ++j) {
        // A copy arriving over a longer path is discarded; equal ones are all kept.
        if (dist[nbrs[j]] + 1 != dist[c]) continue;
        auto& table = rows[c];
        const std::size_t open = open_row[c][j];
        if (aggregation == Aggregation::on && open != kNoRow && table[open].hi + 1 == s) {
          table[open].hi = s;
        } else {
          open_row[c][j] = table.size();
          table.push_back({s, s, nbrs[j]});
        }
      }
    }
  }

  std::vector<ForwardingTable> tables;
  tables.reserve(n);
  for (ComponentId c = 0; c < n; ++c) tables.emplace_back(c, std::move(rows[c]));
  return tables;
}

namespace {

template <typename PickIndex>
DistanceCache horizon_bfs(const Topology& topology, ServerId owner, std::size_t n_max, PickIndex pick) {
  DistanceCache cache{owner, {}};
  if (owner >= topology.n_servers()) throw std::out_of_range("distance cache owner is not a server");
  if (n_max == 0) return cache;
  cache.nearest.reserve(std::min<std::size_t>(n_max, topology.n_servers()));

  std::vector<char> explored(topology.size(), 0);
  std::vector<ComponentId> current{owner};
  std::vector<ComponentId> next;
  std::size_t head = 0;
  explored[owner] = 1;

  while (head < current.size()) {
    // Draw without replacement: move the chosen element to the head slot.
    const std::size_t idx = head + pick(current.size() - head);
    std::swap(current[head], current[idx]);
    const ComponentId u = current[head++];

    if (topology.is_server(u) && u != owner) {
      cache.nearest.push_back(u);
      if (cache.nearest.size() == n_max) return cache;
    }
    for (ComponentId v : topology.neighbors(u)) {
      if (!explored[v]) {
        explored[v] = 1;
        next.push_back(v);
      }
    }
    if (head == current.size()) {
      current.swap(next);
      next.clear();
      head = 0;
    }
  }
  return cache;
}

}  // namespace

DistanceCache build_distance_cache(const Topology& topology, ServerId owner, std::size_t n_max,
                                   std::mt19937_64& rng) {
  return horizon_bfs(topology, owner, n_max, [&rng](std::size_t size) {
    return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
  });
}

DistanceCache build_distance_cache_deterministic(const Topology& topology, ServerId owner,
                                                 std::size_t n_max) {
  return horizon_bfs(topology, owner, n_max, [](std::size_t) { return std::size_t{0}; });
}

TableSet build_table_set(const Topology& topology, const TableOptions& options) {
  TableSet ts;
  ts.topology_hash = topology.hash();
  ts.n_servers = topology.n_servers();
  ts.cache_size = options.cache_size;
  ts.bfs = options.bfs;
  ts.seed = options.seed;
  ts.forwarding = build_forwarding_tables(topology, options.aggregation);
  ts.distances.resize(topology.n_servers());

  // Each owner draws from its own stream, so the result is independent of threading.
  auto build_one = [&](ServerId s) {
    if (options.bfs == BfsMode::stochastic) {
      std::mt19937_64 rng(derive_seed(options.seed, s));
      ts.distances[s] = build_distance_cache(topology, s, options.cache_size, rng);
    } else {
      ts.distances[s] = build_distance_cache_deterministic(topology, s, options.cache_size);
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = std::min<unsigned>(threads, std::max<std::uint32_t>(1, topology.n_servers()));
  if (threads <= 1) {
    for (ServerId s = 0; s < topology.n_servers(); ++s) build_one(s);
  } else {
    std::atomic<ServerId> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (ServerId s = next++; s < topology.n_servers(); s = next++) build_one(s);
      });
    }
  }
  return ts;
}

std::vector<ComponentId> next_hops(const TableSet& tables, ComponentId at, ServerId dest) {
  if (dest >= tables.n_servers) {
    throw std::out_of_range("destination " + std::to_string(dest) + " is not a server");
  }
  if (at >= tables.forwarding.size()) {
    throw std::out_of_range("component " + std::to_string(at) + " out of range");
  }
  return tables.forwarding[at].lookup(dest);
}

TableMemory forwarding_memory(std::span<const ForwardingTable> tables) {
  TableMemory mem;
  for (const auto& table : tables) {
    mem.compressed_rows += table.rows().size();
    for (const auto& row : table.rows()) mem.naive_rows += std::uint64_t{row.hi} - row.lo + 1;
  }
  return mem;
}

namespace {
constexpr detail::Magic kTableMagic{'V', 'N', 'F', 'T'};
}

std::vector<std::uint8_t> encode_tables(const TableSet& tables) {
  detail::ByteWriter w;
  w.u64(tables.topology_hash);
  w.u32(static_cast<std::uint32_t>(tables.forwarding.size()));
  w.u32(tables.n_servers);
  w.u32(tables.cache_size);
  w.u8(static_cast<std::uint8_t>(tables.bfs));
  w.u64(tables.seed);
  for (const auto& table : tables.forwarding) {
    w.u32(static_cast<std::uint32_t>(table.rows().size()));
    for (const auto& row : table.rows()) {
      w.u32(row.lo);
      w.u32(row.hi);
      w.u32(row.next_hop);
    }
  }
  for (const auto& cache : tables.distances) {
    w.u32(static_cast<std::uint32_t>(cache.nearest.size()));
    for (ServerId s : cache.nearest) w.u32(s);
  }
  return detail::frame(kTableMagic, kTableFormatVersion, w.bytes());
}

TableSet decode_tables(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(detail::unframe(bytes, kTableMagic, kTableFormatVersion));
  TableSet ts;
  ts.topology_hash = r.u64();
  const std::uint32_t n_components = r.u32();
  ts.n_servers = r.u32();
  ts.cache_size = r.u32();
  const auto bfs = r.u8();
  if (bfs > 1) throw FormatError("unknown bfs mode " + std::to_string(bfs));
  ts.bfs = static_cast<BfsMode>(bfs);
  ts.seed = r.u64();
  if (ts.n_servers > n_components) throw FormatError("more servers than components");

  ts.forwarding.reserve(n_components);
  for (std::uint32_t c = 0; c < n_components; ++c) {
    const std::uint32_t count = r.u32();
    if (std::uint64_t{count} * 12 > r.remaining()) throw TruncatedError("row block runs past payload end");
    std::vector<RouteRow> rows(count);
    for (auto& row : rows) {
      row.lo = r.u32();
      row.hi = r.u32();
      row.next_hop = r.u32();
      if (row.lo > row.hi || row.hi >= ts.n_servers || row.next_hop >= n_components) {
        throw FormatError("route row out of range in table " + std::to_string(c));
      }
    }
    ts.forwarding.emplace_back(c, std::move(rows));
  }
  ts.distances.resize(ts.n_servers);
  for (ServerId s = 0; s < ts.n_servers; ++s) {
    const std::uint32_t count = r.u32();
    if (std::uint64_t{count} * 4 > r.remaining()) throw TruncatedError("cache runs past payload end");
    auto& cache = ts.distances[s];
    cache.owner = s;
    cache.nearest.resize(count);
    for (auto& id : cache.nearest) {
      id = r.u32();
      if (id >= ts.n_servers) throw FormatError("cache entry is not a server");
    }
  }
  if (!r.done()) throw FormatError("unexpected bytes after table data");
  return ts;
}

void save_tables(const TableSet& tables, const std::filesystem::path& path) {
  detail::write_file(path, encode_tables(tables));
}

TableSet load_tables(const std::filesystem::path& path) {
  return decode_tables(detail::read_file(path));
}

}  // namespace vnfp
