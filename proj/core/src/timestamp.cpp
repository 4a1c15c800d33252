// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/timestamp.hpp"

#include <cctype>
#include <optional>

#include <fmt/format.h>

#include "editjudge/errors.hpp"

namespace editjudge {
namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  std::optional<int> digits(std::size_t n) {
    if (pos_ + n > s_.size()) return std::nullopt;
    int v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const char c = s_[pos_ + i];
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      v = v * 10 + (c - '0');
    }
    pos_ += n;
    return v;
  }

  bool consume(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::optional<char> peek() const {
    if (pos_ < s_.size()) return s_[pos_];
    return std::nullopt;
  }

  bool done() const { return pos_ == s_.size(); }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail(std::string_view text, std::size_t offset) {
  throw ParseError(
      fmt::format("invalid ISO-8601 timestamp '{}' at offset {}", text, offset),
      offset);
}

}  // namespace

Timestamp Timestamp::parse(std::string_view text) {
  using namespace std::chrono;
  Cursor c(text);
  const auto y = c.digits(4);
  if (!y || !c.consume('-')) fail(text, c.pos());
  const auto mo = c.digits(2);
  if (!mo || !c.consume('-')) fail(text, c.pos());
  const auto d = c.digits(2);
  if (!d || !(c.consume('T') || c.consume('t') || c.consume(' '))) {
    fail(text, c.pos());
  }
  const auto hh = c.digits(2);
  if (!hh || !c.consume(':')) fail(text, c.pos());
  const auto mi = c.digits(2);
  if (!mi || !c.consume(':')) fail(text, c.pos());
  const auto ss = c.digits(2);
  if (!ss) fail(text, c.pos());

  int millis = 0;
  if (c.consume('.')) {
    int scale = 100;
    std::size_t n = 0;
    while (auto ch = c.peek()) {
      if (!std::isdigit(static_cast<unsigned char>(*ch))) break;
      if (scale > 0) {
        millis += (*ch - '0') * scale;
        scale /= 10;
      }
      c.digits(1);
      ++n;
    }
    if (n == 0) fail(text, c.pos());
  }

  minutes offset{0};
  if (c.consume('Z') || c.consume('z')) {
  } else if (auto sign = c.peek(); sign == '+' || sign == '-') {
    c.consume(*sign);
    const auto oh = c.digits(2);
    if (!oh) fail(text, c.pos());
    c.consume(':');
    const auto om = c.digits(2);
    if (!om) fail(text, c.pos());
    offset = hours{*oh} + minutes{*om};
    if (*sign == '-') offset = -offset;
  } else {
    // A zone designator is required; local times are ambiguous.
    fail(text, c.pos());
  }
  if (!c.done()) fail(text, c.pos());

  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *hh > 23 || *mi > 59 || *ss > 60) fail(text, 0);

  const auto tp = sys_days{ymd} + hours{*hh} + minutes{*mi} + seconds{*ss} +
                  milliseconds{millis} - offset;
  return Timestamp(time_point_cast<milliseconds>(tp));
}

Timestamp Timestamp::now() {
  return Timestamp(
      std::chrono::time_point_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now()));
}

std::string Timestamp::to_iso8601() const {
  using namespace std::chrono;
  const auto day_point = floor<days>(tp_);
  const year_month_day ymd{day_point};
  const hh_mm_ss<milliseconds> tod{tp_ - day_point};
  auto out = fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}",
                         static_cast<int>(ymd.year()),
                         static_cast<unsigned>(ymd.month()),
                         static_cast<unsigned>(ymd.day()), tod.hours().count(),
                         tod.minutes().count(), tod.seconds().count());
  if (const auto ms = tod.subseconds().count(); ms != 0) {
    out += fmt::format(".{:03d}", ms);
  }
  out += 'Z';
  return out;
}

}  // namespace editjudge
