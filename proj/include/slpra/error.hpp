#pragma once

#include <stdexcept>
#include <string>

namespace slpra {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed SLP documents and invalid grammars.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Positions or spans outside the string.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Arguments that break an operation's preconditions.
class ArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace slpra
