#pragma once

#include <stdexcept>
#include <string>

namespace klcalc {

// Base of every domain error raised by the library. The CLI maps these to
// exit code 3; UsageError maps to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class ParseError : public UsageError {
 public:
  using UsageError::UsageError;
};

class ParityError : public Error {
 public:
  using Error::Error;
};

class NegativeCoefficient : public Error {
 public:
  using Error::Error;
};

class InfiniteType : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class OwnerMismatch : public Error {
 public:
  using Error::Error;
};

class DescentError : public Error {
 public:
  using Error::Error;
};

class NotDominant : public Error {
 public:
  using Error::Error;
};

class InsufficientTruncation : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class CacheError : public Error {
 public:
  using Error::Error;
};

}  // namespace klcalc
