#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace cnnlstm {

/// Incremental 64-bit FNV-1a. Used for content digests in manifests and
/// checkpoint integrity checks, not for anything security related.
class Fnv1a64 {
 public:
  void update(std::span<const unsigned char> bytes);
  void update(std::string_view text);
  void update(std::span<const double> values);
  std::uint64_t value() const noexcept { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// "fnv1a64:<16 hex digits>" of a file's bytes.
std::string file_digest(const std::filesystem::path& path);

}  // namespace cnnlstm
