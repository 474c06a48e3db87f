// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small UTF-8 text helpers shared by the loaders, prompt builder and metrics.
namespace glossmt::text {

// Unicode NFC normalization. Invalid UTF-8 is passed through unchanged.
std::string nfc(std::string_view utf8);

// Trims ASCII whitespace from both ends.
std::string_view trim(std::string_view s);

// Splits on runs of ASCII whitespace, dropping empty pieces.
std::vector<std::string> split_ascii_ws(std::string_view s);

// Collapses internal whitespace runs to one space and trims the ends.
std::string collapse_ws(std::string_view s);

// Splits on '\n', stripping one trailing '\r' per line. A trailing newline
// does not produce an extra empty line.
std::vector<std::string> split_lines(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);

// Decodes UTF-8 into code points; invalid bytes decode to U+FFFD.
std::u32string to_utf32(std::string_view utf8);
std::string to_utf8(std::u32string_view cps);

// Whitespace as understood by Python's str.split() with no argument.
bool is_py_space(char32_t cp);

// Python str.split() over code points.
std::vector<std::u32string> py_split(std::u32string_view s);

// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

// Shortest fixed rendering with at most `max_decimals` decimals and at least
// one: 100 -> "100.0", 48.53470 -> "48.5347".
std::string format_score(double value, int max_decimals = 4);

}  // namespace glossmt::text
