#pragma once

#include <stdexcept>
#include <string>

namespace shotlab {

// Every error raised by the library derives from Error so callers can catch
// one type at stage boundaries. The subclasses mirror the failure classes the
// pipeline distinguishes in its diagnostics.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SpecificationError : public Error { public: using Error::Error; };
class DecodeError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class GeometryError : public Error { public: using Error::Error; };
class SizeError : public Error { public: using Error::Error; };
class SequencingError : public Error { public: using Error::Error; };
class StrategyError : public Error { public: using Error::Error; };
class DataError : public Error { public: using Error::Error; };
class TrainingError : public Error { public: using Error::Error; };
class ConvergenceError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };

/// A pipeline stage failed; what() names the stage and the cause.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error("stage '" + stage + "' failed: " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace shotlab
