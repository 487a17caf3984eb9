#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gifkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a structural invariant (dangling state, overlapping
// alphabets, unroutable channel, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Non-injective renaming, colliding or duplicate decision labels.
class NamingError : public Error {
 public:
  using Error::Error;
};

// A configured state-space or enumeration cap was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its domain (unreachable configuration,
// unused decision, missing choice at a branching point, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// No entry of the decision-extended transition function matches.
class NoSuchTransitionError : public Error {
 public:
  using Error::Error;
};

// A forced input could not be processed while replaying a decision sequence.
class ExecutionFailure : public Error {
 public:
  using Error::Error;
};

// A decision of a sequence is not enabled where it is consumed. The
// position is 1-based within the unrolled sequence.
class NotEnabledError : public Error {
 public:
  NotEnabledError(std::size_t position, const std::string& what)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// The question cannot be answered as asked, e.g. a finite decision
// sequence under Muller acceptance.
class IllPosedQuery : public Error {
 public:
  using Error::Error;
};

}  // namespace gifkit
