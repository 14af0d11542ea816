// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge {

/// Pipeline configuration: INI-style `key = value` lines grouped in
/// `[section]` blocks. Keys before the first section are global (seed,
/// out_dir, threads). Every section and key must be known; anything else is a
/// ConfigError. Values are kept as strings and converted on access.
class Config {
 public:
  Config() = default;

  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  /// Section "" holds the global keys. Throws ConfigError on unknown keys.
  void set(const std::string& section, const std::string& key, std::string value);
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key, const std::string& def) const;
  double get_double(const std::string& section, const std::string& key, double def) const;
  std::size_t get_size(const std::string& section, const std::string& key, std::size_t def) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key, std::uint64_t def) const;
  bool get_bool(const std::string& section, const std::string& key, bool def) const;
  /// Comma-separated; surrounding whitespace and empty items are dropped.
  std::vector<std::string> get_list(const std::string& section, const std::string& key,
                                    const std::vector<std::string>& def) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  const std::vector<double>& def) const;

  std::uint64_t seed() const { return get_u64("", "seed", 0); }
  std::filesystem::path out_dir() const { return get_string("", "out_dir", "forge_out"); }
  std::size_t threads() const { return get_size("", "threads", 1); }

  /// The configured path, or out_dir / fallback when unset.
  std::filesystem::path path(const std::string& section, const std::string& key,
                             const std::filesystem::path& fallback) const;
  /// The configured path or empty when unset.
  std::filesystem::path optional_path(const std::string& section, const std::string& key) const;

  /// Every explicitly set value, by section.
  nlohmann::json to_json() const;
  /// Canonical INI text (sections and keys sorted).
  std::string to_ini() const;

  /// Known keys per section, for documentation and validation.
  static const std::map<std::string, std::vector<std::string>>& schema();

 private:
  const std::string* find(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, std::string>> values_;
};

}  // namespace forge
