#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cnnlstm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (dataset lines, UTF-8, JSON payloads).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A path that was expected to exist does not.
class FileNotFoundError : public Error {
 public:
  using Error::Error;
};

/// Tensor shapes that do not fit the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A loss or activation became NaN/Inf.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint with an unknown version tag.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint that is truncated, corrupt, or fails its digest.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration. Carries every offending key so callers can report
/// all of them at once.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace cnnlstm
