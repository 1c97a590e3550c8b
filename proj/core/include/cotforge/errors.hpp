#pragma once

#include <stdexcept>
#include <string>

namespace cotforge {

// Base class for every error the pipeline raises on purpose. Subclasses map
// onto the CLI exit codes (see tools/).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad flags or an unusable invocation. Exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A record, file, or argument violates a schema or type invariant. Exit code 3.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation precondition (score out of range, all-pass
// report handed to the UT grader, unverified record handed to the SFT
// writer). Treated as a validation failure at the CLI boundary.
class ContractError : public Error {
 public:
  using Error::Error;
};

// A remote backend failed. `retryable()` tells the gateway whether another
// attempt can help. Exit code 4.
class BackendError : public Error {
 public:
  using Error::Error;
  virtual bool retryable() const { return false; }
};

class TimeoutError : public BackendError {
 public:
  using BackendError::BackendError;
  bool retryable() const override { return true; }
};

class HttpError : public BackendError {
 public:
  HttpError(const std::string& what, int status, bool transport_failure = false)
      : BackendError(what), status_(status), transport_(transport_failure) {}
  int status() const { return status_; }
  bool retryable() const override {
    return transport_ || status_ == 408 || status_ == 429 || status_ >= 500;
  }

 private:
  int status_;
  bool transport_;
};

// The backend answered but the body does not satisfy the wire contract
// (missing fields, wrong lengths, scores outside [0,1]). Never retried.
class MalformedResponseError : public BackendError {
 public:
  using BackendError::BackendError;
};

// A mock script has no entry for the requested key, or is exhausted in
// error mode. A scripting bug, never retried.
class MockScriptError : public BackendError {
 public:
  using BackendError::BackendError;
};

// The judge toolchain itself is unusable (interpreter not found). Distinct
// from a per-case runtime error of the program under test. Exit code 4.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

// The quarantine fraction of a grading run exceeded the configured bound.
// Exit code 5.
class QuarantineError : public Error {
 public:
  using Error::Error;
};

}  // namespace cotforge
