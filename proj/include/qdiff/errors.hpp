#pragma once

#include <stdexcept>
#include <string>

namespace qdiff {

// Exit codes used by the command-line tool. Every library exception maps
// to exactly one of these.
enum class ExitCode : int {
    ok = 0,
    parse = 2,
    math = 3,
    precision = 4,
    resource = 5,
};

class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

// column() is 1-based within the parsed string, 0 when not known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, long column = 0)
        : Error(ExitCode::parse, "parse error: " + what), detail_(what), column_(column) {}
    const std::string& detail() const noexcept { return detail_; }
    long column() const noexcept { return column_; }

private:
    std::string detail_;
    long column_;
};

class MathError : public Error {
public:
    explicit MathError(const std::string& what) : Error(ExitCode::math, what) {}
};

// Eigenvalues (or roots of q) that do not live in the configured field.
class FieldExtensionRequired : public MathError {
public:
    explicit FieldExtensionRequired(const std::string& what)
        : MathError("field extension required: " + what) {}
};

class PrecisionError : public Error {
public:
    explicit PrecisionError(const std::string& what)
        : Error(ExitCode::precision, "precision exhausted: " + what) {}
};

// Iteration caps, retry budgets, coefficient height caps.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what)
        : Error(ExitCode::resource, "resource cap: " + what) {}
};

}  // namespace qdiff
