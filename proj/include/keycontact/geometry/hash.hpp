#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace keycontact {

/// 64-bit FNV-1a, used to key cached SDF grids by mesh content.
class Fnv1a64 {
 public:
  void update(const void* data, std::size_t size);
  template <typename T>
  void update_value(const T& v) {
    update(&v, sizeof(T));
  }
  void update(std::string_view s) { update(s.data(), s.size()); }
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 1469598103934665603ULL;
};

std::string to_hex(std::uint64_t value);

}  // namespace keycontact
