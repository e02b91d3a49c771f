#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace acedoe {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a root seed and a path of keys. Distinct paths give
/// statistically independent streams, so work can be split across threads without
/// changing results.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t s = mix64(root);
  for (std::uint64_t k : keys) s = mix64(s ^ mix64(k + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_stream(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
  return Rng(derive_seed(root, keys));
}

/// Stable 64-bit FNV-1a, used to key streams by name.
constexpr std::uint64_t name_key(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace acedoe
