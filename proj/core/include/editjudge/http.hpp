// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace editjudge::http {

struct RetryPolicy {
  int max_retries = 3;  // attempts = max_retries + 1
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{8000};

  /// Delay before retry number `retry` (1-based).
  std::chrono::milliseconds backoff(int retry) const;
};

struct Response {
  int status = 0;
  std::string body;
  int attempts = 0;
  std::chrono::milliseconds latency{0};  // of the successful attempt
};

using Headers = std::vector<std::pair<std::string, std::string>>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// POSTs a JSON body. 5xx, 429 and connection failures are retried with
/// exponential backoff; 401/403 raise ConfigError at once; any other non-2xx
/// raises TransportError without retrying. Exhausted retries raise
/// TransportError carrying the attempt count and last status.
Response post_json(std::string_view url, const Headers& headers, const std::string& body,
                   std::chrono::milliseconds timeout, const RetryPolicy& policy,
                   const Sleeper& sleep = {});

std::string base64_encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> base64_decode(std::string_view text);

}  // namespace editjudge::http
