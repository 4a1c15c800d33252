// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace editjudge::csv {

struct Row {
  std::size_t line;  // 1-based line where the row starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader: comma separated, `"` quoting with `""` escapes, quoted
/// fields may span lines. Accepts LF or CRLF. Blank lines are skipped.
/// Throws ParseError with the line number on an unterminated quote or stray
/// characters after a closing quote.
std::vector<Row> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Joins escaped fields with commas and terminates with '\n'.
std::string format_row(std::span<const std::string> fields);

}  // namespace editjudge::csv
