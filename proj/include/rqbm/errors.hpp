#pragma once

#include <stdexcept>
#include <string>

namespace rqbm {

/// Invalid caller input: bad arguments, violated preconditions, bad config.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested combination exists in the interface but has no implementation
/// (e.g. an asymptotic regime with no closed form).
class UnsupportedError : public InputError {
 public:
  using InputError::InputError;
};

/// Value outside the mathematical domain of a map; carries the offending index.
class DomainError : public InputError {
 public:
  DomainError(const std::string& what, std::size_t index)
      : InputError(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// An iterative method did not reach its tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rqbm
