#pragma once

#include <stdexcept>
#include <string>

namespace glab {

/// Base of every error thrown by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed word, out-of-range bound, mismatched alphabet or group.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Arrows whose source and range do not match.
class CompositionError : public Error {
 public:
  using Error::Error;
};

/// A point outside the domain of a partial map (e.g. a bisection).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Window alignment produced a window larger than the configured cap.
class WindowOverflow : public Error {
 public:
  using Error::Error;
};

/// The truncation depth leaves no room for the requested construction.
class DepthInsufficient : public Error {
 public:
  using Error::Error;
};

class ConditioningOnNull : public Error {
 public:
  using Error::Error;
};

class InvalidCover : public Error {
 public:
  using Error::Error;
};

/// Invalid odometer quotient chain. `witness()` names the failing generator word
/// or point when one exists.
class ChainError : public Error {
 public:
  ChainError(const std::string& what, std::string witness)
      : Error(what + (witness.empty() ? "" : " (witness: " + witness + ")")),
        witness_(std::move(witness)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

}  // namespace glab
