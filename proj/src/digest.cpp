#include "cnnlstm/digest.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

#include "cnnlstm/error.hpp"

namespace cnnlstm {

void Fnv1a64::update(std::span<const unsigned char> bytes) {
  for (unsigned char b : bytes) {
    state_ ^= b;
    state_ *= 0x100000001b3ULL;
  }
}

void Fnv1a64::update(std::string_view text) {
  update({reinterpret_cast<const unsigned char*>(text.data()), text.size()});
}

void Fnv1a64::update(std::span<const double> values) {
  // Little-endian IEEE-754 bytes regardless of host order.
  unsigned char buf[8];
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
    update(std::span<const unsigned char>(buf, 8));
  }
}

std::string Fnv1a64::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError("no such file: " + path.string());
  Fnv1a64 h;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    h.update({reinterpret_cast<const unsigned char*>(buf), static_cast<std::size_t>(in.gcount())});
  }
  return "fnv1a64:" + h.hex();
}

}  // namespace cnnlstm
