#pragma once

#include <stdexcept>
#include <string>

namespace graphfix {

/// Malformed input: unknown label, bad file, argument outside its declared range.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Mathematical domain violation: empty set, alpha >= 1, x <= 0 for Gamma.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A theorem hypothesis was found to fail while computing.
class HypothesisError : public std::runtime_error {
 public:
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace graphfix
