#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace memeflow {

// All randomness in the pipeline flows from one root seed, fanned out into
// labeled sub-streams so that adding a consumer never perturbs another.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label,
                                 std::uint64_t index = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(root ^ splitmix64(h ^ splitmix64(index)));
}

inline std::mt19937_64 make_rng(std::uint64_t root, std::string_view label,
                                std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(root, label, index));
}

}  // namespace memeflow
