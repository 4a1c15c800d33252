// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/http.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <openssl/evp.h>

#include "editjudge/errors.hpp"

namespace editjudge::http {

std::chrono::milliseconds RetryPolicy::backoff(int retry) const {
  const double ms = static_cast<double>(initial_backoff.count()) *
                    std::pow(multiplier, std::max(0, retry - 1));
  return std::min(max_backoff,
                  std::chrono::milliseconds(static_cast<long long>(std::llround(ms))));
}

namespace {

struct Target {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Target split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw ConfigError(fmt::format("URL '{}' has no scheme", url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) return {std::string(url), "/"};
  return {std::string(url.substr(0, path_start)), std::string(url.substr(path_start))};
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

Response post_json(std::string_view url, const Headers& headers, const std::string& body,
                   std::chrono::milliseconds timeout, const RetryPolicy& policy,
                   const Sleeper& sleep) {
  const auto target = split_url(url);
  httplib::Client client(target.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers hdrs;
  for (const auto& [k, v] : headers) hdrs.emplace(k, v);

  const int max_attempts = std::max(0, policy.max_retries) + 1;
  int last_status = 0;
  std::string last_error;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) {
      const auto delay = policy.backoff(attempt - 1);
      if (sleep) {
        sleep(delay);
      } else {
        std::this_thread::sleep_for(delay);
      }
    }
    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(target.path, hdrs, body, "application/json");
    const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    if (!res) {
      last_status = 0;
      last_error = httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status >= 200 && res->status < 300) {
      return Response{res->status, res->body, attempt, latency};
    }
    if (res->status == 401 || res->status == 403) {
      throw ConfigError(fmt::format("endpoint {} rejected credentials (HTTP {})",
                                    target.origin, res->status));
    }
    last_error = fmt::format("HTTP {}", res->status);
    if (!retryable(res->status)) {
      throw TransportError(fmt::format("POST {}{} failed: {}", target.origin, target.path,
                                       last_error),
                           attempt, last_status);
    }
  }
  throw TransportError(fmt::format("POST {}{} failed after {} attempts: {}", target.origin,
                                   target.path, max_attempts, last_error),
                       max_attempts, last_status);
}

std::string base64_encode(std::span<const unsigned char> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw ParseError("base64 length is not a multiple of 4");
  std::vector<unsigned char> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw ParseError("invalid base64");
  std::size_t size = static_cast<std::size_t>(n);
  // EVP_DecodeBlock keeps the zero bytes produced by '=' padding.
  if (!text.empty() && text.back() == '=') --size;
  if (text.size() >= 2 && text[text.size() - 2] == '=') --size;
  out.resize(size);
  return out;
}

}  // namespace editjudge::http
