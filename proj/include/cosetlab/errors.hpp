#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cosetlab {

// Caller passed arguments that violate an operation's contract.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A group recipe could not be realized (e.g. the declared action is not a
// homomorphism into the automorphisms of A).
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is outside the mathematical domain of an operation (not Hermitian,
// not PSD, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A dense or factored representation would exceed the configured capacity.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::size_t requested, std::size_t limit)
      : std::runtime_error(what + " (requested " + std::to_string(requested) +
                           ", limit " + std::to_string(limit) + ")"),
        requested_(requested),
        limit_(limit) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t requested_;
  std::size_t limit_;
};

// The eigensolver failed or a numerically checked identity broke.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cosetlab
