#pragma once

#include <stdexcept>
#include <string>

namespace confdual {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (graph files, JSON documents, rational literals).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// A construction would exceed a configured size cap.
class LimitError : public Error {
public:
    explicit LimitError(const std::string& msg) : Error(msg) {}
};

// An exact solver ran out of its time budget. The computation is
// incomplete; no partial value is reported.
class TimeoutError : public Error {
public:
    explicit TimeoutError(const std::string& msg) : Error(msg) {}
};

// Arguments violate an operation's preconditions (length mismatches,
// out-of-range vertices, non-independent input sets, improper colorings).
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

}  // namespace confdual
