#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xlsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}

    /// Short machine-readable category, printed by the CLI.
    virtual const char* kind() const noexcept { return "error"; }
};

/// Malformed input file. line() is 1-based, 0 when not line-oriented.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& msg)
        : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + msg),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }
    const char* kind() const noexcept override { return "parse"; }

private:
    std::size_t line_;
};

/// Arguments or data that violate an operation's contract.
class InvalidArgument : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_argument"; }
};

/// Id collisions (duplicate document ids, duplicate index entries).
class DuplicateError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "duplicate"; }
};

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

/// Serialized artifact with the wrong format tag, version, or broken invariants.
class FormatError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "format"; }
};

}  // namespace xlsim
