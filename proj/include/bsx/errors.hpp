#pragma once

#include <stdexcept>
#include <string>

namespace bsx {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (x=0 where the target is unbounded, beta on a node, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Parameter combination for which no extremal function is available (c too large, growth condition missing, delta<1).
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class Overflow : public Error {
public:
    using Error::Error;
};

}  // namespace bsx
