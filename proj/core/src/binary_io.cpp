#include "binary_io.hpp"

#include <fstream>
#include <iterator>
#include <string>

#include "vnfp/errors.hpp"
#include "vnfp/hash.hpp"

namespace vnfp::detail {

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::varint(std::uint64_t v) {
  while (v >= 0x80) {
    bytes_.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  bytes_.push_back(static_cast<std::uint8_t>(v));
}

void ByteReader::need(std::size_t n) const {
  if (remaining() < n) {
    throw TruncatedError("unexpected end of data at byte " + std::to_string(pos_));
  }
}

std::uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{data_[pos_++]} << (8 * i);
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{data_[pos_++]} << (8 * i);
  return v;
}

std::uint64_t ByteReader::varint() {
  std::uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const std::uint8_t b = u8();
    v |= std::uint64_t{b & 0x7fu} << shift;
    if ((b & 0x80u) == 0) return v;
  }
  throw FormatError("varint longer than 10 bytes");
}

namespace {
constexpr std::size_t kHeaderSize = 4 + 4 + 8;
constexpr std::size_t kTrailerSize = 8;
}  // namespace

std::vector<std::uint8_t> frame(const Magic& magic, std::uint32_t version,
                                std::span<const std::uint8_t> payload) {
  ByteWriter w;
  for (char c : magic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(version);
  w.u64(payload.size());
  w.raw(payload);
  w.u64(fnv1a(payload));
  return w.take();
}

std::span<const std::uint8_t> unframe(std::span<const std::uint8_t> file, const Magic& magic,
                                      std::uint32_t version) {
  if (file.size() < 4) throw TruncatedError("file shorter than its magic number");
  for (std::size_t i = 0; i < 4; ++i) {
    if (file[i] != static_cast<std::uint8_t>(magic[i])) {
      throw FormatError("bad magic: expected '" + std::string(magic.begin(), magic.end()) + "'");
    }
  }
  if (file.size() < kHeaderSize) throw TruncatedError("file shorter than its header");
  ByteReader header(file.subspan(4, kHeaderSize - 4));
  const std::uint32_t found = header.u32();
  if (found != version) throw VersionError(found, version);
  const std::uint64_t len = header.u64();
  if (file.size() - kHeaderSize < kTrailerSize || file.size() - kHeaderSize - kTrailerSize < len) {
    throw TruncatedError("payload declares " + std::to_string(len) + " bytes but file holds " +
                         std::to_string(file.size()));
  }
  if (file.size() != kHeaderSize + len + kTrailerSize) {
    throw FormatError("trailing bytes after checksum");
  }
  auto payload = file.subspan(kHeaderSize, static_cast<std::size_t>(len));
  ByteReader trailer(file.subspan(kHeaderSize + payload.size(), kTrailerSize));
  if (trailer.u64() != fnv1a(payload)) throw ChecksumError("payload checksum mismatch");
  return payload;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

}  // namespace vnfp::detail
