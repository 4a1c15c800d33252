// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#include "editjudge/http.hpp"

#include <atomic>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "editjudge/errors.hpp"
#include "local_server.hpp"

namespace editjudge {
namespace {

using namespace std::chrono_literals;

http::RetryPolicy fast_policy(int retries = 3) {
  http::RetryPolicy p;
  p.max_retries = retries;
  return p;
}

TEST(Http, RetriesServerErrorsThenSucceeds) {
  std::atomic<int> calls{0};
  testing::LocalServer server([&](httplib::Server& s) {
    s.Post("/v1", [&](const httplib::Request& req, httplib::Response& res) {
      if (++calls < 3) {
        res.status = 500;
        return;
      }
      EXPECT_EQ(req.get_header_value("X-Test"), "1");
      res.set_content(req.body, "application/json");
    });
  });
  std::vector<std::chrono::milliseconds> sleeps;
  const auto r = http::post_json(server.url("/v1"), {{"X-Test", "1"}}, R"({"a":1})", 5s,
                                 fast_policy(), [&](auto d) { sleeps.push_back(d); });
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, R"({"a":1})");
  EXPECT_EQ(r.attempts, 3);
  EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{500ms, 1000ms}));
}

TEST(Http, ExhaustedRetriesReportAttemptsAndStatus) {
  testing::LocalServer server([](httplib::Server& s) {
    s.Post("/", [](const httplib::Request&, httplib::Response& res) { res.status = 429; });
  });
  try {
    http::post_json(server.url("/"), {}, "{}", 5s, fast_policy(2), [](auto) {});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.attempts(), 3);
    EXPECT_EQ(e.status(), 429);
  }
}

TEST(Http, AuthFailureIsConfigErrorWithoutRetry) {
  std::atomic<int> calls{0};
  testing::LocalServer server([&](httplib::Server& s) {
    s.Post("/", [&](const httplib::Request&, httplib::Response& res) {
      ++calls;
      res.status = 401;
    });
  });
  EXPECT_THROW(http::post_json(server.url("/"), {}, "{}", 5s, fast_policy(), [](auto) {}),
               ConfigError);
  EXPECT_EQ(calls.load(), 1);
}

TEST(Http, ClientErrorIsNotRetried) {
  std::atomic<int> calls{0};
  testing::LocalServer server([&](httplib::Server& s) {
    s.Post("/", [&](const httplib::Request&, httplib::Response& res) {
      ++calls;
      res.status = 404;
    });
  });
  try {
    http::post_json(server.url("/"), {}, "{}", 5s, fast_policy(), [](auto) {});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.attempts(), 1);
    EXPECT_EQ(e.status(), 404);
  }
  EXPECT_EQ(calls.load(), 1);
}

TEST(Http, ConnectionRefusedIsRetried) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  int sleeps = 0;
  try {
    http::post_json("http://127.0.0.1:" + std::to_string(port) + "/", {}, "{}", 1s,
                    fast_policy(1), [&](auto) { ++sleeps; });
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.attempts(), 2);
    EXPECT_EQ(e.status(), 0);
  }
  EXPECT_EQ(sleeps, 1);
  EXPECT_THROW(http::post_json("localhost/x", {}, "{}", 1s, fast_policy()), ConfigError);
}

TEST(Http, BackoffGrowsAndCaps) {
  http::RetryPolicy p;
  EXPECT_EQ(p.backoff(1), 500ms);
  EXPECT_EQ(p.backoff(2), 1000ms);
  EXPECT_EQ(p.backoff(4), 4000ms);
  EXPECT_EQ(p.backoff(10), 8000ms);
}

TEST(Base64, RoundTripAndPadding) {
  for (std::string s : {"", "f", "fo", "foo", "foob", "fooba", "foobar"}) {
    const std::vector<unsigned char> bytes(s.begin(), s.end());
    const auto enc = http::base64_encode(bytes);
    EXPECT_EQ(http::base64_decode(enc), bytes) << s;
  }
  const std::string foobar = "foobar";
  EXPECT_EQ(http::base64_encode(std::vector<unsigned char>(foobar.begin(), foobar.end())),
            "Zm9vYmFy");
  EXPECT_THROW(http::base64_decode("abc"), ParseError);
  EXPECT_THROW(http::base64_decode("a!b?"), ParseError);
}

}  // namespace
}  // namespace editjudge
