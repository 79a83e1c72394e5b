#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace vnfp {

/// splitmix64 output function.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the `index`-th independent stream under a master seed.
/// Streams depend only on (seed, index), never on scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ (index * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL));
}

/// 64-bit FNV-1a, used for checksums and provenance hashes.
class Fnv1a {
 public:
  Fnv1a& update(std::span<const std::uint8_t> bytes) noexcept {
    for (auto b : bytes) {
      state_ ^= b;
      state_ *= kPrime;
    }
    return *this;
  }

  Fnv1a& update(std::string_view text) noexcept {
    for (char c : text) {
      state_ ^= static_cast<std::uint8_t>(c);
      state_ *= kPrime;
    }
    return *this;
  }

  Fnv1a& update_u64(std::uint64_t v) noexcept {
    for (int i = 0; i < 8; ++i) {
      state_ ^= static_cast<std::uint8_t>(v >> (8 * i));
      state_ *= kPrime;
    }
    return *this;
  }

  std::uint64_t value() const noexcept { return state_; }

 private:
  static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t state_ = kOffset;
};

inline std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) noexcept {
  return Fnv1a{}.update(bytes).value();
}

inline std::uint64_t fnv1a(std::string_view text) noexcept {
  return Fnv1a{}.update(text).value();
}

}  // namespace vnfp
