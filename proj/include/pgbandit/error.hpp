#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pgbandit {

enum class ErrorCode {
  invalid_argument = 1,
  dimension_mismatch = 2,
  simplex_violation = 3,
  integration_failure = 4,
  config = 5,
  io = 6,
  fit = 7,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by run_experiment when a module error occurs inside a replication.
class ReplicationError : public Error {
 public:
  ReplicationError(ErrorCode code, const std::string& what, std::size_t replication, std::size_t step)
      : Error(code, what), replication_(replication), step_(step) {}
  std::size_t replication() const noexcept { return replication_; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t replication_;
  std::size_t step_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace pgbandit
