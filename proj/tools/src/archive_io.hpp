#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vnfp/search.hpp"

namespace vnfp::cli {

/// First line of every archive file.
struct ArchiveHeader {
  std::string kind;  // "initial" or "final"
  std::string config_hash;
  std::uint64_t seed = 0;
  std::uint64_t repetition = 0;
  std::string model;
  std::size_t arity = 0;
  std::size_t evaluations = 0;
};

/// One solution as stored on disk. Non-finite objective values are written as
/// the strings "inf" / "-inf" / "nan".
struct ArchiveRecord {
  nlohmann::json genotype;
  std::optional<std::vector<double>> objectives;
  std::uint32_t unplaced = 0;
  std::uint32_t services_without = 0;
  std::uint64_t eval_seed = 0;
};

struct ArchiveFile {
  ArchiveHeader header;
  std::vector<ArchiveRecord> records;
};

ArchiveRecord to_record(const Solution& solution);

/// Line-delimited JSON: the header, then one record per line.
void write_archive(std::ostream& out, const ArchiveHeader& header, std::span<const Solution> solutions);
void write_archive(const std::filesystem::path& path, const ArchiveHeader& header,
                   std::span<const Solution> solutions);

/// Throws std::runtime_error with the offending line number on malformed input.
ArchiveFile read_archive(std::istream& in);
ArchiveFile read_archive(const std::filesystem::path& path);

}  // namespace vnfp::cli
