#pragma once

#include <stdexcept>
#include <string>

namespace proofgram {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported input (files, command-line values).
class InputError : public Error {
public:
  using Error::Error;
};

/// A name that should be declared is not.
class LookupError : public Error {
public:
  using Error::Error;
};

/// Caller violated an operation's precondition.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// An internal invariant failed; indicates a bug or a digest collision.
class InternalError : public Error {
public:
  using Error::Error;
};

} // namespace proofgram
