// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/hash.hpp"

#include "forge/rng.hpp"

namespace forge {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv_step(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) {
  return mix64(fnv_step(kFnvOffset ^ mix64(seed), bytes) + seed);
}

std::uint64_t hash_tokens(std::span<const std::string> tokens, std::uint64_t seed) {
  std::uint64_t h = kFnvOffset ^ mix64(seed);
  for (const auto& t : tokens) {
    h = fnv_step(h, t);
    h = fnv_step(h, "\x1f");
  }
  return mix64(h + seed + tokens.size());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

}  // namespace forge
