#pragma once

#include <stdexcept>
#include <string>

namespace ofdmici {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A structured text document could not be parsed. The message carries
/// line and field context.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace ofdmici
