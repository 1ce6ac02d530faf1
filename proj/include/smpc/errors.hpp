#pragma once

#include <stdexcept>
#include <string>

namespace smpc {

// Invalid run or primitive configuration (mismatched moduli, violated
// scheme preconditions, malformed config keys).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument to a primitive (duplicate evaluation points, out-of-range
// plaintexts, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematically undefined operation, e.g. inverting zero.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A value does not fit the representable range of the field or codec.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Not enough shares / partial decryptions to reconstruct.
class InsufficientShares : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that cannot be a valid ciphertext or protocol artifact.
class CorruptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace smpc
