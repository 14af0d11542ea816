// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "forge/parallel.hpp"

#include <atomic>

namespace forge {

namespace {
std::atomic<std::size_t> g_threads{1};
}

void set_num_threads(std::size_t n) { g_threads = n == 0 ? 1 : n; }

std::size_t num_threads() { return g_threads.load(); }

}  // namespace forge
