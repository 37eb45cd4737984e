#include "pitchblur/core/random.hpp"

namespace pitchblur {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::int64_t stream) {
  return mix64(seed ^ mix64(static_cast<std::uint64_t>(stream)));
}

}  // namespace pitchblur
