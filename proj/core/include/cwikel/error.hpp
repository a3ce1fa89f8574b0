#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cwikel {

enum class ErrorKind {
  InvalidInput,
  NonIntegrable,
  ZeroFunction,
  DegenerateCube,
  GridMismatch,
  NegativeWeight,
  NegativeFunction,
  UnsupportedDimension,
  ZeroSeminorm,
  AliasError,
  OriginSingularity,
  BoxTooSmall,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure surfaced by the library carries one of the kinds above so
// callers (the CLI in particular) can map it to a report entry.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cwikel
