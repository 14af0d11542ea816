// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace forge {

/// splitmix64 finalizer. Bijective on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Seeded 64-bit hash of a byte string (FNV-1a core, mixed with the seed).
std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed);

/// Hash of a token sequence; tokens are separated by U+001F so that
/// ["ab","c"] and ["a","bc"] hash differently.
std::uint64_t hash_tokens(std::span<const std::string> tokens, std::uint64_t seed);

}  // namespace forge
