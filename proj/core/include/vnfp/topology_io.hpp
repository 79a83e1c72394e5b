#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vnfp/topology.hpp"

namespace vnfp {

/// Current `VNFG` format version.
inline constexpr std::uint32_t kTopologyFormatVersion = 1;

/// Compact binary form: `VNFG` frame around
///   family:u8 size:u32 n_components:varint n_servers:varint
///   per component: class:u8 ports:varint degree:varint deltas:varint*
/// where deltas are the sorted neighbor ids, first absolute then differences.
std::vector<std::uint8_t> encode_topology(const Topology& topology);
/// Throws FormatError / VersionError / TruncatedError / ChecksumError.
Topology decode_topology(std::span<const std::uint8_t> bytes);

/// Debug text form:
///   # vnfg-edgelist <family> <size>
///   c <id> server|switch <ports>     (one per component, servers first)
///   e <a> <b>                        (one per undirected link, a < b)
std::string to_edge_list(const Topology& topology);
/// Throws std::invalid_argument with the offending line number.
Topology parse_edge_list(std::string_view text);

void save_topology(const Topology& topology, const std::filesystem::path& path);
Topology load_topology(const std::filesystem::path& path);

}  // namespace vnfp
