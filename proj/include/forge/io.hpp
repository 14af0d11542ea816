// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// Throws MissingInput when `path` does not exist.
void require_exists(const fs::path& path, std::string_view what);

std::string read_text(const fs::path& path);

/// Writes `contents` to a sibling temp file, then renames it over `path`.
/// Parent directories are created as needed.
void write_atomic(const fs::path& path, std::string_view contents);

/// One JSON value per non-empty line.
std::vector<json> read_jsonl(const fs::path& path);

/// Serializes each element compactly, one per line, LF-terminated.
std::string to_jsonl(const std::vector<json>& rows);

json read_json(const fs::path& path);

/// Pretty-printed with a trailing newline; keys are emitted sorted.
void write_json(const fs::path& path, const json& value);

}  // namespace forge::io
