// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace editjudge {

/// A UTC instant with millisecond resolution.
///
/// Parses ISO-8601 date-times with a `Z` or numeric offset and always prints
/// the canonical UTC form `YYYY-MM-DDTHH:MM:SSZ`, adding `.mmm` only when the
/// millisecond part is non-zero. Sub-millisecond digits are truncated.
class Timestamp {
 public:
  using TimePoint = std::chrono::sys_time<std::chrono::milliseconds>;

  Timestamp() = default;
  explicit Timestamp(TimePoint tp) : tp_(tp) {}

  /// Throws ParseError on malformed input.
  static Timestamp parse(std::string_view text);
  static Timestamp now();

  std::string to_iso8601() const;
  TimePoint time_point() const noexcept { return tp_; }

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

 private:
  TimePoint tp_{};
};

}  // namespace editjudge
