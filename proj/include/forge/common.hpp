// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

using TokenId = std::uint32_t;
using TokenIds = std::vector<TokenId>;
using Tokens = std::vector<std::string>;

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configuration file or flag could not be parsed or validated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A required input file or directory does not exist.
class MissingInput : public Error {
 public:
  using Error::Error;
};

/// A file exists but its contents are malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace forge
