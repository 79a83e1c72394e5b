#include "vnfp/topology_io.hpp"

#include <sstream>
#include <stdexcept>

#include "binary_io.hpp"
#include "vnfp/errors.hpp"

namespace vnfp {

namespace {
constexpr detail::Magic kMagic{'V', 'N', 'F', 'G'};
}

std::vector<std::uint8_t> encode_topology(const Topology& topology) {
  detail::ByteWriter w;
  const auto kind = topology.kind();
  w.u8(static_cast<std::uint8_t>(kind.family));
  w.u32(kind.size);
  w.varint(topology.size());
  w.varint(topology.n_servers());
  for (const auto& c : topology.components()) {
    w.u8(static_cast<std::uint8_t>(c.cls));
    w.varint(c.port_count);
    const auto nbrs = topology.neighbors(c.id);
    w.varint(nbrs.size());
    ComponentId prev = 0;
    for (ComponentId v : nbrs) {
      w.varint(v - prev);
      prev = v;
    }
  }
  return detail::frame(kMagic, kTopologyFormatVersion, w.bytes());
}

Topology decode_topology(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(detail::unframe(bytes, kMagic, kTopologyFormatVersion));
  const auto family = r.u8();
  if (family > static_cast<std::uint8_t>(TopologyFamily::custom)) {
    throw FormatError("unknown topology family tag " + std::to_string(family));
  }
  const TopologyKind kind{static_cast<TopologyFamily>(family), r.u32()};
  const auto n = r.varint();
  const auto n_servers = r.varint();
  if (n_servers > n || n > r.remaining()) throw FormatError("inconsistent component counts");

  std::vector<Component> components;
  std::vector<std::vector<ComponentId>> adjacency(n);
  components.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto cls = r.u8();
    if (cls > 1) throw FormatError("unknown component class " + std::to_string(cls));
    const auto ports = r.varint();
    const auto degree = r.varint();
    if (degree > r.remaining()) throw TruncatedError("adjacency list runs past end of payload");
    auto& list = adjacency[i];
    list.reserve(degree);
    std::uint64_t v = 0;
    for (std::uint64_t j = 0; j < degree; ++j) {
      v += r.varint();
      if (v >= n) throw FormatError("neighbor id out of range");
      list.push_back(static_cast<ComponentId>(v));
    }
    components.push_back({static_cast<ComponentId>(i), static_cast<ComponentClass>(cls),
                          static_cast<std::uint32_t>(ports)});
  }
  if (!r.done()) throw FormatError("unexpected bytes after adjacency data");
  return Topology(std::move(components), std::move(adjacency), static_cast<std::uint32_t>(n_servers), kind);
}

std::string to_edge_list(const Topology& topology) {
  std::ostringstream out;
  out << "# vnfg-edgelist " << to_string(topology.kind().family) << ' ' << topology.kind().size << '\n';
  for (const auto& c : topology.components()) {
    out << "c " << c.id << ' ' << (c.cls == ComponentClass::server ? "server" : "switch") << ' '
        << c.port_count << '\n';
  }
  for (const auto& c : topology.components()) {
    for (ComponentId v : topology.neighbors(c.id)) {
      if (c.id < v) out << "e " << c.id << ' ' << v << '\n';
    }
  }
  return out.str();
}

Topology parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  TopologyKind kind;
  std::vector<Component> components;
  std::vector<std::pair<ComponentId, ComponentId>> links;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "#") {
      std::string magic, family;
      fields >> magic >> family >> kind.size;
      if (magic != "vnfg-edgelist") continue;
      auto parsed = parse_family(family);
      if (!parsed) fail("unknown family '" + family + "'");
      kind.family = *parsed;
    } else if (tag == "c") {
      std::uint64_t id = 0, ports = 0;
      std::string cls;
      if (!(fields >> id >> cls >> ports)) fail("malformed component record");
      if (id != components.size()) fail("component ids must be listed densely in order");
      if (cls != "server" && cls != "switch") fail("unknown class '" + cls + "'");
      components.push_back({static_cast<ComponentId>(id),
                            cls == "server" ? ComponentClass::server : ComponentClass::switch_,
                            static_cast<std::uint32_t>(ports)});
    } else if (tag == "e") {
      std::uint64_t a = 0, b = 0;
      if (!(fields >> a >> b)) fail("malformed link record");
      links.emplace_back(static_cast<ComponentId>(a), static_cast<ComponentId>(b));
    } else {
      fail("unknown record tag '" + tag + "'");
    }
  }

  std::uint32_t n_servers = 0;
  while (n_servers < components.size() && components[n_servers].cls == ComponentClass::server) ++n_servers;
  std::vector<std::vector<ComponentId>> adjacency(components.size());
  for (auto [a, b] : links) {
    if (a >= components.size() || b >= components.size()) {
      throw std::invalid_argument("edge list link references unknown component");
    }
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  return Topology(std::move(components), std::move(adjacency), n_servers, kind);
}

void save_topology(const Topology& topology, const std::filesystem::path& path) {
  detail::write_file(path, encode_topology(topology));
}

Topology load_topology(const std::filesystem::path& path) {
  return decode_topology(detail::read_file(path));
}

}  // namespace vnfp
