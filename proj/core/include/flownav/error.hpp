#pragma once

#include <stdexcept>
#include <string>

namespace flownav {

enum class ErrorKind {
  kClassification,  // label id missing from the label mapping
  kConfig,          // invalid or unknown configuration value
  kInput,           // malformed input data (dimensions, NaN, empty sets)
  kIo,              // file could not be read, written or decoded
  kTargetNotFound,
  kUnreachable,     // no reachable goal / start / free space
  kGeneration,      // procedural scene generation could not satisfy its constraints
  kInternal,        // broken internal invariant
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flownav
