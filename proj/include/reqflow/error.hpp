#pragma once

#include <stdexcept>
#include <string>

namespace reqflow {

enum class ErrorKind {
    validation,  // malformed input or violated precondition
    not_found,   // unknown id / tag
    conflict,    // duplicate id, illegal state transition
    io,          // filesystem or transport failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Syntax error carrying the byte offset where parsing stopped.
class ParseError : public Error {
public:
    ParseError(std::size_t pos, const std::string& what)
        : Error(ErrorKind::validation, what + " at offset " + std::to_string(pos)), pos_(pos) {}

    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace reqflow
