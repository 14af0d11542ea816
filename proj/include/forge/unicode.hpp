// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace forge::unicode {

/// NFC-normalizes UTF-8 text. Ill-formed sequences become U+FFFD.
std::string nfc(std::string_view utf8);

/// Root-locale full lowercase mapping followed by NFC.
std::string lower_nfc(std::string_view utf8);

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view cps);
std::string to_utf8(char32_t cp);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
/// Letter, decimal digit, or combining mark (marks extend a word run).
bool is_word(char32_t cp);
bool is_space(char32_t cp);
/// General category Cc.
bool is_control(char32_t cp);
/// General category P* or S*.
bool is_punct_or_symbol(char32_t cp);
bool is_han(char32_t cp);
bool is_latin(char32_t cp);

}  // namespace forge::unicode
