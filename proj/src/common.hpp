// SPDX-License-Identifier: MIT
//
// Shared error taxonomy and cooperative-deadline support.
//
// Every failure surfaced to callers is one of three categories, which map 1:1
// onto C-API status values and CLI exit codes:
//   input    (2) - malformed or out-of-contract input
//   timeout  (3) - a cooperative deadline expired
//   internal (4) - a broken invariant inside the engine (always a bug)

#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace facta {

enum class ErrorCode : int { Input = 2, Timeout = 3, Internal = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct InputError : Error {
  explicit InputError(const std::string& m) : Error(ErrorCode::Input, m) {}
};
struct TimeoutError : Error {
  explicit TimeoutError(const std::string& m) : Error(ErrorCode::Timeout, m) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& m) : Error(ErrorCode::Internal, m) {}
};

// Invariant guard; active in all build types (violations are engine bugs and
// must never be silently optimized away).
#define FACTA_CHECK(cond, msg)                                             \
  do {                                                                     \
    if (!(cond)) throw ::facta::InternalError(std::string("invariant: ") + (msg)); \
  } while (0)

/// Cooperative deadline. Long-running passes call `check()` between node
/// visits / expansion steps; the wall clock is consulted every few hundred
/// calls to keep the overhead negligible.
class Deadline {
 public:
  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds budget)
      : end_(std::chrono::steady_clock::now() + budget) {}

  static Deadline unlimited() { return Deadline(); }

  void check() const {
    if (!end_) return;
    if (++ticks_ % 256 != 0) return;
    if (std::chrono::steady_clock::now() >= *end_)
      throw TimeoutError("operation exceeded its time budget");
  }

  bool limited() const { return end_.has_value(); }

 private:
  std::optional<std::chrono::steady_clock::time_point> end_;
  mutable unsigned long ticks_ = 0;
};

}  // namespace facta
