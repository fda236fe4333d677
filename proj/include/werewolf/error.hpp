#pragma once

#include <stdexcept>
#include <string>

namespace werewolf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid GameConfig / run-config file contents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An event that is illegal in the current state (live or during log replay).
class ReplayError : public Error {
 public:
  using Error::Error;
};

// A policy produced an action the rules forbid. Carries the offending seat.
class ProtocolError : public Error {
 public:
  ProtocolError(int seat, const std::string& what)
      : Error("seat " + std::to_string(seat) + ": " + what), seat_(seat) {}
  int seat() const { return seat_; }

 private:
  int seat_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Prompt template rendering failed (unknown slot referenced).
class TemplateError : public Error {
 public:
  using Error::Error;
};

// A model reply could not be turned into a legal action.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Connection-level HTTP failure (no response). Retryable.
class TransportError : public Error {
 public:
  using Error::Error;
};

// The endpoint rejected our credential (401/403). Never retried.
class CredentialError : public Error {
 public:
  using Error::Error;
};

// Retries exhausted or a non-retryable HTTP status. Carries the last status
// code seen, 0 when the failure never produced a response.
class CompletionError : public Error {
 public:
  CompletionError(int status, const std::string& what)
      : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// Anything that indicates a bug in the library rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace werewolf
