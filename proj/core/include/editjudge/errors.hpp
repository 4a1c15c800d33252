// Copyright 2026 The editjudge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace editjudge {

/// Root of every error raised by the library. `kind()` is a stable,
/// machine-readable tag written into CLI error logs.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

/// Input text could not be parsed. `location()` names the line (1-based) or
/// byte offset in the source; 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t location = 0)
      : Error(what), location_(location) {}
  std::size_t location() const noexcept { return location_; }
  const char* kind() const noexcept override { return "parse"; }

 private:
  std::size_t location_;
};

/// A value parsed fine but violates a domain invariant. `field()` names the
/// offending field so callers can surface it.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }
  const char* kind() const noexcept override { return "validation"; }

 private:
  std::string field_;
};

class ShapeMismatchError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "shape_mismatch"; }
};

/// Input is well-formed but the requested quantity is undefined on it
/// (all-true mask, constant series, zero-norm embedding, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate_input"; }
};

class PreconditionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "precondition"; }
};

class UnsupportedCapabilityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unsupported_capability"; }
};

/// Bad or incomplete configuration: unknown keys, unresolvable secrets,
/// authentication rejected by a remote endpoint. Never retried.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

/// A remote call failed. `attempts()` is how many tries were made before
/// giving up; `status()` is the last HTTP status (0 for connection errors).
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts, int status)
      : Error(what), attempts_(attempts), status_(status) {}
  int attempts() const noexcept { return attempts_; }
  int status() const noexcept { return status_; }
  const char* kind() const noexcept override { return "transport"; }

 private:
  int attempts_;
  int status_;
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

/// The judge response could not be turned into a verdict. The raw response is
/// kept for audit.
class VerdictParseError : public Error {
 public:
  VerdictParseError(const std::string& what, std::string raw,
                    std::vector<std::string> factors = {})
      : Error(what), raw_(std::move(raw)), factors_(std::move(factors)) {}
  const std::string& raw_response() const noexcept { return raw_; }
  /// Factor ids implicated in the failure (missing or out of range).
  const std::vector<std::string>& factors() const noexcept { return factors_; }
  const char* kind() const noexcept override { return "verdict_parse"; }

 private:
  std::string raw_;
  std::vector<std::string> factors_;
};

/// Every attempt to obtain a valid verdict for a task failed.
class JudgingError : public Error {
 public:
  JudgingError(const std::string& what, std::string last_raw, int attempts)
      : Error(what), last_raw_(std::move(last_raw)), attempts_(attempts) {}
  const std::string& last_raw_response() const noexcept { return last_raw_; }
  int attempts() const noexcept { return attempts_; }
  const char* kind() const noexcept override { return "judging"; }

 private:
  std::string last_raw_;
  int attempts_;
};

}  // namespace editjudge
