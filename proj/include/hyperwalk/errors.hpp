#pragma once

#include <stdexcept>
#include <string>

namespace hyperwalk {

// Base of every error raised by the library. The kind() string is the
// stable identifier that shows up in reports and CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define HYPERWALK_ERROR(Name)                                          \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  }

HYPERWALK_ERROR(NotLoxodromic);
HYPERWALK_ERROR(PrefixTooShallow);
HYPERWALK_ERROR(BaseNotOnGeodesic);
HYPERWALK_ERROR(DisksOverlap);
HYPERWALK_ERROR(MappingViolation);
HYPERWALK_ERROR(IterationLimit);
HYPERWALK_ERROR(Unstable);
HYPERWALK_ERROR(NonConvergence);
HYPERWALK_ERROR(ValidationFailed);
HYPERWALK_ERROR(DepthInsufficient);
HYPERWALK_ERROR(TooShort);
HYPERWALK_ERROR(ChartMismatch);
HYPERWALK_ERROR(InvalidArgument);

#undef HYPERWALK_ERROR

class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& what)
      : Error("ConfigError", "line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace hyperwalk
