#pragma once

#include <stdexcept>
#include <string>

namespace nhwave {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Model parameters violate a physical or structural precondition.
class InvalidParameter : public Error {
  public:
    using Error::Error;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Requested operation is not defined for this model / boundary / backend.
class Unsupported : public Error {
  public:
    using Error::Error;
};

/// Argument lies outside the validity domain of a closed form.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A scalar solve found no bracketed root.
class NoRootError : public Error {
  public:
    using Error::Error;
};

/// Working precision cannot deliver the requested accuracy.
class PrecisionError : public Error {
  public:
    PrecisionError(const std::string& what, long suggested_bits) : Error(what), suggested_bits_(suggested_bits) {}
    long suggested_bits() const noexcept { return suggested_bits_; }

  private:
    long suggested_bits_;
};

}  // namespace nhwave
