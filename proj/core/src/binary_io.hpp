#pragma once

// Little-endian byte encoding shared by the topology and table file formats.
//
// Every file is framed as
//   magic[4] | version:u32 | payload_len:u64 | payload | fnv1a(payload):u64
// so truncation, version skew and corruption are distinguishable before the
// payload is parsed.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace vnfp::detail {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void varint(std::uint64_t v);
  void raw(std::span<const std::uint8_t> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }

  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<std::uint8_t> take() noexcept { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

/// Bounds-checked reader; running past the end throws TruncatedError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::uint64_t varint();

  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  bool done() const noexcept { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

using Magic = std::array<char, 4>;

std::vector<std::uint8_t> frame(const Magic& magic, std::uint32_t version,
                                std::span<const std::uint8_t> payload);

/// Validates the frame and returns a view of the payload.
std::span<const std::uint8_t> unframe(std::span<const std::uint8_t> file, const Magic& magic,
                                      std::uint32_t version);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

}  // namespace vnfp::detail
