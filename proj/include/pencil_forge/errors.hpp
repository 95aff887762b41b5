#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pencil_forge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is the 0-based character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error("syntax error at column " + std::to_string(position) + ": " + what),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownSymbolError : public Error {
public:
    explicit UnknownSymbolError(const std::string& token)
        : Error("unknown symbol '" + token + "'"), token_(token) {}

    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

class MultipleRadicandsError : public Error {
public:
    using Error::Error;
};

class DivisionByZeroError : public Error {
public:
    using Error::Error;
};

class NotIntegrableError : public Error {
public:
    using Error::Error;
};

class JetOrderError : public Error {
public:
    using Error::Error;
};

class DegenerateMetricError : public Error {
public:
    using Error::Error;
};

class NotLiouvilleError : public Error {
public:
    using Error::Error;
};

class NonlocalUnresolvedError : public Error {
public:
    using Error::Error;
};

class NotExactError : public Error {
public:
    using Error::Error;
};

class NotClosedError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

}  // namespace pencil_forge
