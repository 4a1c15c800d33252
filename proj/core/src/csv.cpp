// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/csv.hpp"

#include <fmt/format.h>

#include "editjudge/errors.hpp"

namespace editjudge::csv {

std::vector<Row> parse(std::string_view text) {
  std::vector<Row> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  while (i < n) {
    // Skip blank lines.
    if (text[i] == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (text[i] == '\r' && i + 1 < n && text[i + 1] == '\n') {
      ++line;
      i += 2;
      continue;
    }

    Row row{line, {}};
    std::string field;
    bool row_done = false;
    while (!row_done) {
      field.clear();
      if (i < n && text[i] == '"') {
        const std::size_t open_line = line;
        ++i;
        bool closed = false;
        while (i < n) {
          const char c = text[i];
          if (c == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            closed = true;
            break;
          }
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
        if (!closed) {
          throw ParseError(
              fmt::format("unterminated quoted field starting on line {}",
                          open_line),
              open_line);
        }
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          throw ParseError(
              fmt::format("unexpected character after closing quote on line {}",
                          line),
              line);
        }
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"') {
            throw ParseError(
                fmt::format("stray quote in unquoted field on line {}", line),
                line);
          }
          field += text[i];
          ++i;
        }
      }
      row.fields.push_back(field);

      if (i >= n) {
        row_done = true;
      } else if (text[i] == ',') {
        ++i;
      } else if (text[i] == '\r') {
        i += (i + 1 < n && text[i + 1] == '\n') ? 2 : 1;
        ++line;
        row_done = true;
      } else {  // '\n'
        ++i;
        ++line;
        row_done = true;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_row(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  out += '\n';
  return out;
}

}  // namespace editjudge::csv
