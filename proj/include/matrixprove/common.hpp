#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace matrixprove {

enum class Mode { Intuitionistic, Classical };

inline const char* modeName(Mode m) {
  return m == Mode::Intuitionistic ? "intuitionistic" : "classical";
}

// Stable 64-bit FNV-1a, used for formula digests. Must not change across
// releases of the same format version.
inline uint64_t fnv64(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string toHex(uint64_t v);

}  // namespace matrixprove
