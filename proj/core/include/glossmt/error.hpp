// Copyright 2026 The glossmt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glossmt {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line()` is 1-based; 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A request, config or argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class CacheMiss : public Error {
 public:
  explicit CacheMiss(std::string key)
      : Error("no cached response for key " + key), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Network-level failure, or an HTTP status that may succeed on retry.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Non-retryable HTTP status from an endpoint.
class HttpStatusError : public Error {
 public:
  HttpStatusError(int status, std::string body)
      : Error("endpoint returned HTTP " + std::to_string(status) + ": " + body),
        status_(status),
        body_(std::move(body)) {}
  int status() const noexcept { return status_; }
  const std::string& body() const noexcept { return body_; }

 private:
  int status_;
  std::string body_;
};

// Too many entry-level failures for a run to be meaningful.
class RunFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace glossmt
