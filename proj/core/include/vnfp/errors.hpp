#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vnfp {

/// Base for every failure while decoding a persisted topology or table file.
class SerializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wrong magic or structurally impossible content.
class FormatError : public SerializationError {
 public:
  using SerializationError::SerializationError;
};

class VersionError : public SerializationError {
 public:
  VersionError(std::uint32_t found, std::uint32_t expected)
      : SerializationError("unsupported format version " + std::to_string(found) +
                           " (expected " + std::to_string(expected) + ")"),
        found_(found) {}

  std::uint32_t found() const noexcept { return found_; }

 private:
  std::uint32_t found_;
};

class TruncatedError : public SerializationError {
 public:
  using SerializationError::SerializationError;
};

class ChecksumError : public SerializationError {
 public:
  using SerializationError::SerializationError;
};

}  // namespace vnfp
